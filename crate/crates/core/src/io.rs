//! Reading and writing contour datasets, synthetic data generators, and
//! serialization of results.
//!
//! CSV output always uses 17 significant digits (`{:.16e}`), LF line endings
//! and a header row, so numbers survive a write/read round trip exactly.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`. The sphere generator uses one stream; the contour
//! generator gives contour `i` its own stream (`set_stream(i)`), so each
//! contour depends only on `(seed, i)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::engine::{principal_curve_points, project_sample_to_pc, t_grid, EpcaBackend, EpcaResult};
use crate::error::{EpcaError, Result};
use crate::geometry::complete_orthonormal_frame;
use crate::shape::{resample_arclength, Contour, PreShape};
use crate::sphere::{sphere_project, SphereSample, UnitVector};

/// Layout of a contour file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContourFormat {
    /// Decide from the file contents: two rows of more than two numbers are
    /// a matrix, anything else is a point list.
    #[default]
    Auto,
    /// Header `x,y`, then one point per row.
    Points,
    /// Two rows (x coordinates, then y coordinates), one column per point.
    Matrix,
}

/// JSON manifest describing a dataset on disk. File names are relative to
/// the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub files: Vec<String>,
    pub k_common: Option<usize>,
    pub provenance: String,
}

/// Contours that all have `k_common` points (when set), counterclockwise,
/// with the starting landmark at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourDataset {
    pub name: String,
    pub provenance: String,
    pub k_common: Option<usize>,
    pub contours: Vec<Contour>,
}

impl ContourDataset {
    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    /// Common point count, or an error when contours differ.
    pub fn common_k(&self) -> Result<usize> {
        let first = self
            .contours
            .first()
            .ok_or_else(|| EpcaError::input("dataset has no contours"))?
            .len();
        if let Some((i, c)) = self.contours.iter().enumerate().find(|(_, c)| c.len() != first) {
            return Err(EpcaError::input(format!(
                "contour {i} has {} points but contour 0 has {first}; resample to a common count",
                c.len()
            )));
        }
        Ok(first)
    }

    /// Preshapes of all contours.
    pub fn preshapes(&self) -> Result<Vec<PreShape>> {
        self.common_k()?;
        self.contours.iter().map(crate::shape::to_preshape).collect()
    }

    /// Resamples every contour to `k` arclength-uniform points.
    pub fn resampled(&self, k: usize) -> Result<Self> {
        Ok(Self {
            contours: self
                .contours
                .iter()
                .map(|c| resample_arclength(c, k))
                .collect::<Result<_>>()?,
            k_common: Some(k),
            ..self.clone()
        })
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| EpcaError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| EpcaError::io(path, e))
}

fn parse_error(path: &Path, line: usize, msg: impl Into<String>) -> EpcaError {
    EpcaError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with their 1-based line numbers, header dropped.
fn data_lines(text: &str) -> Vec<(usize, &str)> {
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if let Some((_, first)) = lines.first() {
        if first.split(',').any(|f| f.trim().parse::<f64>().is_err()) && first.chars().any(|c| c.is_alphabetic()) {
            lines.remove(0);
        }
    }
    lines
}

fn parse_row(path: &Path, line: usize, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|f| {
            let f = f.trim();
            let v: f64 = f
                .parse()
                .map_err(|_| parse_error(path, line, format!("not a number: {f:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_error(path, line, format!("non-finite value {f:?}")))
            }
        })
        .collect()
}

/// Reads one contour file.
pub fn read_contour(path: &Path, format: ContourFormat) -> Result<Contour> {
    let text = read_text(path)?;
    let lines = data_lines(&text);
    let rows: Vec<(usize, Vec<f64>)> = lines
        .iter()
        .map(|&(n, l)| Ok((n, parse_row(path, n, l)?)))
        .collect::<Result<_>>()?;
    let format = match format {
        ContourFormat::Auto if rows.len() == 2 && rows[0].1.len() > 2 => ContourFormat::Matrix,
        ContourFormat::Auto => ContourFormat::Points,
        f => f,
    };
    let last_line = rows.last().map_or(1, |r| r.0);
    let points: Vec<[f64; 2]> = match format {
        ContourFormat::Matrix => {
            if rows.len() != 2 {
                return Err(parse_error(
                    path,
                    last_line,
                    format!("matrix layout needs 2 rows, found {}", rows.len()),
                ));
            }
            if rows[0].1.len() != rows[1].1.len() {
                return Err(parse_error(
                    path,
                    rows[1].0,
                    format!("row lengths differ ({} vs {})", rows[0].1.len(), rows[1].1.len()),
                ));
            }
            rows[0].1.iter().zip(&rows[1].1).map(|(&x, &y)| [x, y]).collect()
        }
        _ => rows
            .iter()
            .map(|(n, r)| match r.as_slice() {
                &[x, y] => Ok([x, y]),
                _ => Err(parse_error(path, *n, format!("expected 2 fields, found {}", r.len()))),
            })
            .collect::<Result<_>>()?,
    };
    if points.len() < 3 {
        return Err(parse_error(
            path,
            last_line,
            format!("contour has {} points, at least 3 are needed", points.len()),
        ));
    }
    Contour::new(points).map_err(|e| match e {
        EpcaError::Input(msg) => parse_error(path, rows.first().map_or(1, |r| r.0), msg),
        other => other,
    })
}

/// Reads a dataset manifest and its contour files. `resample` overrides the
/// manifest's `k_common`: `Some(Some(k))` resamples to `k`, `Some(None)`
/// disables resampling, `None` follows the manifest.
pub fn read_contours(
    manifest_path: &Path,
    format: ContourFormat,
    resample: Option<Option<usize>>,
) -> Result<ContourDataset> {
    let text = read_text(manifest_path)?;
    let manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|e| parse_error(manifest_path, e.line(), e.to_string()))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let contours = manifest
        .files
        .iter()
        .map(|f| read_contour(&dir.join(f), format))
        .collect::<Result<Vec<_>>>()?;
    let dataset = ContourDataset {
        name: manifest.name,
        provenance: manifest.provenance,
        k_common: None,
        contours,
    };
    match resample.unwrap_or(manifest.k_common) {
        Some(k) => dataset.resampled(k),
        None => Ok(dataset),
    }
}

/// Number formatting used by every CSV writer.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a contour as `x,y` CSV.
pub fn write_contour_csv(path: &Path, contour: &Contour) -> Result<()> {
    let mut s = String::from("x,y\n");
    for &[x, y] in contour.points() {
        let _ = writeln!(s, "{},{}", fmt_num(x), fmt_num(y));
    }
    write_text(path, &s)
}

/// Writes `contour_000.csv`, … and `manifest.json` into `dir`.
pub fn write_dataset(dataset: &ContourDataset, dir: &Path) -> Result<DatasetManifest> {
    fs::create_dir_all(dir).map_err(|e| EpcaError::io(dir, e))?;
    let width = dataset.len().saturating_sub(1).to_string().len().max(3);
    let mut files = Vec::with_capacity(dataset.len());
    for (i, c) in dataset.contours.iter().enumerate() {
        let name = format!("contour_{i:0width$}.csv");
        write_contour_csv(&dir.join(&name), c)?;
        files.push(name);
    }
    let manifest = DatasetManifest {
        name: dataset.name.clone(),
        files,
        k_common: dataset.k_common,
        provenance: dataset.provenance.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_text(&dir.join("manifest.json"), &json)?;
    Ok(manifest)
}

/// Parameters of the concentrated sphere sample generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSphereConfig {
    pub n: usize,
    pub mean_direction: UnitVector,
    /// Standard deviations along the tangent axes at `mean_direction`
    /// (the columns of `complete_orthonormal_frame`).
    pub tangent_sigmas: Vec<f64>,
    pub seed: u64,
}

impl SyntheticSphereConfig {
    /// 300 points on `S²` around the direction of `(0.2153, 0.8692, 0.4461)`,
    /// standard deviations `(0.18, 0.065)`.
    pub fn default_with_seed(seed: u64) -> Self {
        Self {
            n: 300,
            mean_direction: sphere_project(&DVector::from_vec(vec![0.2153, 0.8692, 0.4461])).expect("nonzero"),
            tangent_sigmas: vec![0.18, 0.065],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(EpcaError::input("n must be at least 1"));
        }
        let m = self.mean_direction.ambient_dim() - 1;
        if self.tangent_sigmas.len() != m {
            return Err(EpcaError::input(format!(
                "expected {m} tangent sigmas, got {}",
                self.tangent_sigmas.len()
            )));
        }
        if self.tangent_sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(EpcaError::input("sigmas must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Gaussian offsets in the tangent space at the mean direction, mapped to
/// the sphere by radial projection of `mean + offset`.
pub fn gen_sphere_sample(cfg: &SyntheticSphereConfig) -> Result<SphereSample> {
    cfg.validate()?;
    let mean = cfg.mean_direction.as_vector();
    let frame = complete_orthonormal_frame(mean)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = (0..cfg.n)
        .map(|_| {
            let coords = DVector::from_iterator(
                cfg.tangent_sigmas.len(),
                cfg.tangent_sigmas
                    .iter()
                    .map(|s| s * rng.sample::<f64, _>(StandardNormal)),
            );
            sphere_project(&(mean + &frame * coords))
        })
        .collect::<Result<_>>()?;
    SphereSample::new(points)
}

/// Star-shaped template with radius `1 + 0.45cos2θ + 0.25cos4θ − 0.1cos6θ`
/// at `k` equally spaced angles.
pub fn butterfly_template(k: usize) -> Result<Contour> {
    let points = (0..k)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / k as f64;
            let r = 1.0 + 0.45 * (2.0 * t).cos() + 0.25 * (4.0 * t).cos() - 0.1 * (6.0 * t).cos();
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    Contour::new(points)
}

/// Weight of the `sin 3θ` mode relative to the `cos 2θ` mode.
const SECOND_MODE_WEIGHT: f64 = 0.7;
/// Weight of each weak harmonic (orders 4 to 8, cosine and sine).
const WEAK_MODE_WEIGHT: f64 = 0.1;

/// `n` perturbed copies of `template`. Each point moves radially away from
/// the template centroid by the factor `1 + noise_sigma·δ(θ_j)`, with
/// `θ_j = 2πj/k` and `δ(θ) = a·cos2θ + 0.7·b·sin3θ + 0.1·Σ_{h=4}^{8}(c_h cos hθ + d_h sin hθ)`
/// for standard normal coefficients. A random similarity (rotation uniform
/// on `[0, 2π)`, log-scale `N(0, 0.25²)`, translation `N(0, 1)` per axis)
/// is applied afterwards, which the shape pipeline quotients out.
pub fn gen_contour_sample(template: &Contour, n: usize, noise_sigma: f64, seed: u64) -> Result<ContourDataset> {
    if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
        return Err(EpcaError::input("noise_sigma must be finite and non-negative"));
    }
    let k = template.len();
    let (cx, cy) = template
        .points()
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p[0] / k as f64, sy + p[1] / k as f64));
    let contours = (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut normal = || rng.sample::<f64, _>(StandardNormal);
            let a = normal();
            let b = normal();
            let weak: Vec<(f64, f64)> = (4..=8).map(|_| (normal(), normal())).collect();
            let rotation = 2.0 * PI * rng.random::<f64>();
            let mut normal = || rng.sample::<f64, _>(StandardNormal);
            let scale = (0.25 * normal()).exp();
            let translation = [normal(), normal()];
            let points = template
                .points()
                .iter()
                .enumerate()
                .map(|(j, &[x, y])| {
                    let t = 2.0 * PI * j as f64 / k as f64;
                    let mut delta = a * (2.0 * t).cos() + SECOND_MODE_WEIGHT * b * (3.0 * t).sin();
                    for (h, (c, d)) in (4..=8).zip(&weak) {
                        let ht = h as f64 * t;
                        delta += WEAK_MODE_WEIGHT * (c * ht.cos() + d * ht.sin());
                    }
                    let f = 1.0 + noise_sigma * delta;
                    [cx + f * (x - cx), cy + f * (y - cy)]
                })
                .collect();
            Contour::new(points)?.similarity(rotation, scale, translation)
        })
        .collect::<Result<_>>()?;
    Ok(ContourDataset {
        name: "synthetic-contours".into(),
        provenance: format!(
            "generated: {k}-point template, n={n}, noise_sigma={noise_sigma}, seed={seed}, ChaCha8 stream per contour"
        ),
        k_common: Some(k),
        contours,
    })
}

/// How a manifold point is laid out in CSV files.
pub trait CsvPoint {
    /// Column names (without any leading parameter column).
    fn csv_header(&self) -> String;
    /// One or more rows per point.
    fn csv_rows(&self) -> Vec<String>;
}

impl CsvPoint for UnitVector {
    fn csv_header(&self) -> String {
        (1..=self.ambient_dim())
            .map(|i| format!("x{i}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![self
            .as_vector()
            .iter()
            .map(|&v| fmt_num(v))
            .collect::<Vec<_>>()
            .join(",")]
    }
}

/// Shapes are written as their preshape landmarks, one row per landmark.
impl CsvPoint for PreShape {
    fn csv_header(&self) -> String {
        "landmark,x,y".into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.points()
            .iter()
            .enumerate()
            .map(|(i, &[x, y])| format!("{i},{},{}", fmt_num(x), fmt_num(y)))
            .collect()
    }
}

/// Rows `(component, eigenvalue, ratio, cumulative)`, components 1-based.
pub fn scree_table(eigenvalues: &[f64]) -> Vec<(usize, f64, f64, f64)> {
    let total: f64 = eigenvalues.iter().sum();
    let mut cumulative = 0.0;
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let ratio = if total > crate::engine::ZERO_VARIANCE {
                l / total
            } else {
                0.0
            };
            cumulative += ratio;
            (i + 1, l, ratio, cumulative)
        })
        .collect()
}

pub fn scree_csv(eigenvalues: &[f64]) -> String {
    let mut s = String::from("component,eigenvalue,ratio,cumulative\n");
    for (c, l, r, cu) in scree_table(eigenvalues) {
        let _ = writeln!(s, "{c},{},{},{}", fmt_num(l), fmt_num(r), fmt_num(cu));
    }
    s
}

/// Eigenvalue column of a `scree.csv` file.
pub fn read_scree(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    data_lines(&text)
        .into_iter()
        .map(|(n, l)| {
            let row = parse_row(path, n, l)?;
            row.get(1)
                .copied()
                .ok_or_else(|| parse_error(path, n, "missing eigenvalue column"))
        })
        .collect()
}

/// Bar chart of explained ratios as a standalone SVG document.
pub fn scree_svg(eigenvalues: &[f64]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 300.0;
    const PAD: f64 = 40.0;
    let rows = scree_table(eigenvalues);
    let shown = &rows[..rows.len().min(20)];
    let bar_w = (W - 2.0 * PAD) / shown.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/>"#,
        y = H - PAD,
        x2 = W - PAD
    );
    for (i, &(c, _, ratio, _)) in shown.iter().enumerate() {
        let h = ratio * (H - 2.0 * PAD);
        let x = PAD + i as f64 * bar_w;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"/>"#,
            x + 0.1 * bar_w,
            H - PAD - h,
            0.8 * bar_w,
            h
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{c}</text>"#,
            x + 0.5 * bar_w,
            H - PAD + 14.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="middle">{:.1}%</text>"#,
            x + 0.5 * bar_w,
            H - PAD - h - 4.0,
            100.0 * ratio
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="20" font-size="12" text-anchor="middle">explained variance by component</text>"#,
        W / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// What [`write_results`] should emit besides the fixed files.
#[derive(Debug, Clone)]
pub struct ResultOptions {
    /// 0-based components whose principal curves are written as
    /// `pc_curve_<component + 1>.csv`.
    pub curves: Vec<usize>,
    pub t_grid: usize,
    /// Also write `projections_1.csv`, the samples projected onto the first
    /// principal curve.
    pub projections: bool,
}

impl Default for ResultOptions {
    fn default() -> Self {
        Self {
            curves: vec![0, 1],
            t_grid: crate::engine::DEFAULT_T_GRID,
            projections: false,
        }
    }
}

/// Files written and curves skipped by [`write_results`].
#[derive(Debug, Default)]
pub struct WriteReport {
    pub files: Vec<PathBuf>,
    /// `(component, reason)` for curves that are undefined.
    pub skipped: Vec<(usize, String)>,
}

/// CSV of points, each optionally prefixed by a leading column value.
fn point_table<P: CsvPoint>(points: &[(Option<String>, &P)], lead: &str) -> String {
    let mut s = String::new();
    if let Some((_, p)) = points.first() {
        let _ = writeln!(s, "{lead}{}", p.csv_header());
    }
    for (param, p) in points {
        let prefix = param.as_ref().map(|t| format!("{t},")).unwrap_or_default();
        for row in p.csv_rows() {
            let _ = writeln!(s, "{prefix}{row}");
        }
    }
    s
}

/// Writes `scree.csv`, `scree.svg`, `mean.csv`, `scores.csv` and the
/// requested principal curves into `out_dir` (created if missing). Curves of
/// components inside a multiplicity group, or of a sample without spread,
/// are skipped and reported.
pub fn write_results<B>(
    backend: &B,
    result: &EpcaResult<B>,
    out_dir: &Path,
    opts: &ResultOptions,
) -> Result<WriteReport>
where
    B: EpcaBackend,
    B::Point: CsvPoint,
{
    fs::create_dir_all(out_dir).map_err(|e| EpcaError::io(out_dir, e))?;
    let mut report = WriteReport::default();
    let mut emit = |name: String, text: String| -> Result<()> {
        let path = out_dir.join(name);
        write_text(&path, &text)?;
        report.files.push(path);
        Ok(())
    };

    let eigenvalues = result.eigenvalues.as_slice();
    emit("scree.csv".into(), scree_csv(eigenvalues))?;
    emit("scree.svg".into(), scree_svg(eigenvalues))?;
    emit("mean.csv".into(), point_table(&[(None, &result.extrinsic_mean)], ""))?;

    let m = result.scores.ncols();
    let mut scores = String::from("sample");
    for c in 1..=m {
        let _ = write!(scores, ",score{c}");
    }
    scores.push('\n');
    for (i, row) in result.scores.row_iter().enumerate() {
        let _ = write!(scores, "{i}");
        for v in row.iter() {
            let _ = write!(scores, ",{}", fmt_num(*v));
        }
        scores.push('\n');
    }
    emit("scores.csv".into(), scores)?;

    let grid = t_grid(opts.t_grid);
    for &c in &opts.curves {
        if c >= result.dim() {
            report.skipped.push((c, format!("component {} does not exist", c + 1)));
            continue;
        }
        if result.zero_variance {
            report.skipped.push((c, "sample has no spread".into()));
            continue;
        }
        match principal_curve_points(backend, result, c, &grid) {
            Ok(points) => {
                let rows: Vec<_> = grid.iter().map(|&t| Some(fmt_num(t))).zip(&points).collect();
                emit(format!("pc_curve_{}.csv", c + 1), point_table(&rows, "t,"))?;
            }
            Err(e @ EpcaError::Multiplicity { .. }) => report.skipped.push((c, e.to_string())),
            Err(e) => return Err(e),
        }
    }

    if opts.projections && !result.zero_variance {
        match project_sample_to_pc(backend, result, 0) {
            Ok(points) => {
                let rows: Vec<_> = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (Some(i.to_string()), p))
                    .collect();
                let text = point_table(&rows, "sample,");
                emit("projections_1.csv".into(), text)?;
            }
            Err(e @ EpcaError::Multiplicity { .. }) => report.skipped.push((0, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Writes sphere sample points as CSV (`x1,…,xd`).
pub fn write_sphere_sample(path: &Path, sample: &SphereSample) -> Result<()> {
    let rows: Vec<(Option<String>, &UnitVector)> = sample.points().iter().map(|p| (None, p)).collect();
    write_text(path, &point_table(&rows, ""))
}

/// Reads sphere points from CSV, one point per row; rows are normalized
/// (a zero row is a focal input and is rejected).
pub fn read_sphere_sample(path: &Path) -> Result<SphereSample> {
    let text = read_text(path)?;
    let lines = data_lines(&text);
    let mut points = Vec::with_capacity(lines.len());
    let mut width = None;
    for (n, l) in lines {
        let row = parse_row(path, n, l)?;
        if *width.get_or_insert(row.len()) != row.len() || row.len() < 2 {
            return Err(parse_error(path, n, format!("unexpected row length {}", row.len())));
        }
        let p = sphere_project(&DVector::from_vec(row)).map_err(|e| match e {
            EpcaError::FocalPoint(msg) => EpcaError::focal(format!("{}:{n}: {msg}", path.display())),
            other => other,
        })?;
        points.push(p);
    }
    if points.is_empty() {
        return Err(parse_error(path, 1, "no points"));
    }
    SphereSample::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scree_arithmetic() {
        let rows = scree_table(&[0.0305, 0.0044]);
        assert!((rows[0].3 - 0.8739).abs() < 5e-5);
        assert!((rows[1].3 - 1.0).abs() < 1e-12);
        assert!(scree_table(&[0.0, 0.0]).iter().all(|r| r.2 == 0.0));
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sphere_generator_degenerate_noise() {
        let mut cfg = SyntheticSphereConfig::default_with_seed(3);
        cfg.tangent_sigmas = vec![0.0, 0.0];
        let s = gen_sphere_sample(&cfg).unwrap();
        for p in s.points() {
            assert!((p.as_vector() - cfg.mean_direction.as_vector()).amax() < 1e-6);
        }
        cfg.tangent_sigmas = vec![0.1];
        assert!(gen_sphere_sample(&cfg).is_err());
    }

    #[test]
    fn contour_generator_is_per_index() {
        let t = butterfly_template(40).unwrap();
        let a = gen_contour_sample(&t, 5, 0.1, 9).unwrap();
        let b = gen_contour_sample(&t, 3, 0.1, 9).unwrap();
        assert_eq!(&a.contours[..3], &b.contours[..]);
        assert!(a.contours.iter().all(|c| c.signed_area() > 0.0));
    }
}
