//! Run configuration, campaign execution and trace output.
//!
//! Configurations are TOML documents:
//!
//! ```toml
//! [layer.top]
//! rho_s = 2200.0
//! # ... rho_f, phi, a, k_s, k_f, k_b, mu
//!
//! [layer.bottom]
//! # ...
//!
//! [source]
//! depth = 500.0
//! f_u = -1e10
//! f_w = -1e10
//! f_p = 0.0
//! wavelet = "gauss5"   # or "delta", or "sampled" with `dt` and `samples`
//! f0 = 15.0
//!
//! [receivers]
//! points = [[400.0, 533.0], [400.0, -533.0]]
//!
//! [grid]
//! t_start = 0.0
//! t_end = 1.0
//! # base_dt defaults to 1/(40 f0); samples_per_phase to 2000
//!
//! [output]
//! dir = "out"
//! decompose = true
//! gnuplot = false
//! prefix = "receiver"
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{Medium, Receiver, SourceMix, WavePhase};
use crate::material::{LayerDerived, PoroelasticMaterial};
use crate::source::{synthesize, SampledWavelet, SourceWavelet, TimeGrid, Trace};

pub const DEFAULT_SAMPLES_PER_PHASE: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    layer: LayerSection,
    source: SourceSection,
    receivers: ReceiverSection,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerSection {
    top: PoroelasticMaterial<f64>,
    bottom: PoroelasticMaterial<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WaveletKind {
    Gauss5,
    Delta,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSection {
    depth: f64,
    f_u: f64,
    f_w: f64,
    f_p: f64,
    wavelet: WaveletKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiverSection {
    points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    #[serde(default)]
    t_start: f64,
    #[serde(default = "default_t_end")]
    t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_dt: Option<f64>,
    #[serde(default = "default_samples")]
    samples_per_phase: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: default_t_end(),
            base_dt: None,
            samples_per_phase: default_samples(),
        }
    }
}

fn default_t_end() -> f64 {
    1.0
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES_PER_PHASE
}

/// Where and how results are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_true")]
    pub decompose: bool,
    #[serde(default)]
    pub gnuplot: bool,
    #[serde(default = "default_prefix")]
    pub prefix: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            decompose: true,
            gnuplot: false,
            prefix: default_prefix(),
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_true() -> bool {
    true
}

fn default_prefix() -> String {
    "receiver".to_string()
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub top: PoroelasticMaterial<f64>,
    pub bottom: PoroelasticMaterial<f64>,
    /// Source depth above the interface (m).
    pub h: f64,
    pub f_u: f64,
    pub f_w: f64,
    pub f_p: f64,
    pub wavelet: SourceWavelet<f64>,
    pub receivers: Vec<Receiver<f64>>,
    pub grid: TimeGrid<f64>,
    pub samples_per_phase: usize,
    pub output: OutputConfig,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a TOML configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        msg: e.message().to_string(),
    })?;
    RunConfig::from_file(file)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

impl RunConfig {
    fn from_file(f: ConfigFile) -> Result<Self> {
        let cfg_err = |msg: String| Error::Config(msg);
        for (name, m) in [
            ("layer.top", &f.layer.top),
            ("layer.bottom", &f.layer.bottom),
        ] {
            m.validate().map_err(|e| cfg_err(format!("{name}: {e}")))?;
        }
        let h = f.source.depth;
        if !(h.is_finite() && h > 0.0) {
            return Err(cfg_err(format!("source.depth must be > 0, got {h}")));
        }
        for (name, v) in [
            ("f_u", f.source.f_u),
            ("f_w", f.source.f_w),
            ("f_p", f.source.f_p),
        ] {
            if !v.is_finite() {
                return Err(cfg_err(format!("source.{name} must be finite")));
            }
        }
        let s = &f.source;
        let wavelet = match s.wavelet {
            WaveletKind::Gauss5 => {
                let f0 = s.f0.ok_or_else(|| {
                    cfg_err("source.f0 is required for the gauss5 wavelet".into())
                })?;
                SourceWavelet::gauss5(f0).map_err(|e| cfg_err(format!("source.f0: {e}")))?
            }
            WaveletKind::Delta => SourceWavelet::Delta,
            WaveletKind::Sampled => {
                let dt = s
                    .dt
                    .ok_or_else(|| cfg_err("source.dt is required for a sampled wavelet".into()))?;
                let values = s.samples.clone().ok_or_else(|| {
                    cfg_err("source.samples is required for a sampled wavelet".into())
                })?;
                SourceWavelet::Sampled(
                    SampledWavelet::new(dt, values).map_err(|e| cfg_err(format!("source: {e}")))?,
                )
            }
        };
        if f.receivers.points.is_empty() {
            return Err(cfg_err(
                "receivers.points must list at least one receiver".into(),
            ));
        }
        let receivers = f
            .receivers
            .points
            .iter()
            .enumerate()
            .map(|(i, &[x, y])| {
                if !(x.is_finite() && y.is_finite()) {
                    return Err(cfg_err(format!("receiver {i} has non-finite coordinates")));
                }
                Receiver::new(x, y)
                    .map_err(|_| cfg_err(format!("receiver {i} lies on the interface y = 0")))
            })
            .collect::<Result<Vec<_>>>()?;
        let base_dt = match (f.grid.base_dt, s.f0) {
            (Some(dt), _) => dt,
            (None, Some(f0)) => 1.0 / (40.0 * f0),
            (None, None) => {
                return Err(cfg_err(
                    "grid.base_dt is required when source.f0 is absent".into(),
                ))
            }
        };
        let grid = TimeGrid::new(f.grid.t_start, f.grid.t_end, base_dt)
            .map_err(|e| cfg_err(format!("grid: {e}")))?;
        if f.grid.samples_per_phase < 2 {
            return Err(cfg_err("grid.samples_per_phase must be at least 2".into()));
        }
        Ok(Self {
            top: f.layer.top,
            bottom: f.layer.bottom,
            h,
            f_u: f.source.f_u,
            f_w: f.source.f_w,
            f_p: f.source.f_p,
            wavelet,
            receivers,
            grid,
            samples_per_phase: f.grid.samples_per_phase,
            output: f.output,
        })
    }

    fn to_file(&self) -> ConfigFile {
        let (wavelet, f0, dt, samples) = match &self.wavelet {
            SourceWavelet::Gauss5 { f0 } => (WaveletKind::Gauss5, Some(*f0), None, None),
            SourceWavelet::Delta => (WaveletKind::Delta, None, None, None),
            SourceWavelet::Sampled(s) => (
                WaveletKind::Sampled,
                None,
                Some(s.dt()),
                Some(s.values().to_vec()),
            ),
        };
        ConfigFile {
            layer: LayerSection {
                top: self.top,
                bottom: self.bottom,
            },
            source: SourceSection {
                depth: self.h,
                f_u: self.f_u,
                f_w: self.f_w,
                f_p: self.f_p,
                wavelet,
                f0,
                dt,
                samples,
            },
            receivers: ReceiverSection {
                points: self.receivers.iter().map(|r| [r.x, r.y]).collect(),
            },
            grid: GridSection {
                t_start: self.grid.t_start,
                t_end: self.grid.t_end,
                base_dt: Some(self.grid.base_dt),
                samples_per_phase: self.samples_per_phase,
            },
            output: self.output.clone(),
        }
    }

    /// Normalised TOML text; parsing it yields `self` again.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("configuration is always representable")
    }

    pub fn medium(&self) -> Result<Medium<f64>> {
        let top = LayerDerived::from_material(&self.top).map_err(|e| e.context("layer.top"))?;
        let bottom =
            LayerDerived::from_material(&self.bottom).map_err(|e| e.context("layer.bottom"))?;
        Medium::new(top, bottom, self.h)
    }

    pub fn source_mix(&self, medium: &Medium<f64>) -> Result<SourceMix<f64>> {
        SourceMix::new(self.f_u, self.f_w, self.f_p, &medium.top)
    }
}

/// Computes one trace per receiver, in configuration order.
pub fn compute_traces(cfg: &RunConfig) -> Result<Vec<Trace<f64>>> {
    let medium = cfg.medium()?;
    let mix = cfg.source_mix(&medium)?;
    cfg.receivers
        .par_iter()
        .map(|rec| {
            synthesize(
                &medium,
                &mix,
                rec,
                &cfg.wavelet,
                &cfg.grid,
                cfg.samples_per_phase,
            )
        })
        .collect()
}

/// Files written by a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutput {
    pub traces: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub gnuplot: Option<PathBuf>,
}

/// Shortest decimal string that parses back to `v`.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}

pub fn trace_file_name(cfg: &RunConfig, index: usize) -> String {
    format!("{}_{index:03}.csv", cfg.output.prefix)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes one trace as CSV.
pub fn write_trace_csv(path: &Path, trace: &Trace<f64>, decompose: bool) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["t".to_string(), "ux_total".into(), "uy_total".into()];
    if decompose {
        for (phase, _) in &trace.channels {
            header.push(format!("ux_{}", phase.name()));
            header.push(format!("uy_{}", phase.name()));
        }
    }
    w.write_record(&header).map_err(csv_err)?;
    let mut row = Vec::with_capacity(header.len());
    for (k, t) in trace.times.iter().enumerate() {
        row.clear();
        row.push(format_number(*t));
        row.push(format_number(trace.total[k][0]));
        row.push(format_number(trace.total[k][1]));
        if decompose {
            for (_, ch) in &trace.channels {
                row.push(format_number(ch[k][0]));
                row.push(format_number(ch[k][1]));
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the per-receiver arrival manifest.
pub fn write_manifest(path: &Path, traces: &[Trace<f64>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "receiver",
        "x",
        "y",
        "phase",
        "applies",
        "t0",
        "t_h",
        "head_gate",
    ])
    .map_err(csv_err)?;
    for (i, trace) in traces.iter().enumerate() {
        for (phase, a) in &trace.arrivals {
            w.write_record([
                i.to_string(),
                format_number(trace.receiver.x),
                format_number(trace.receiver.y),
                phase.name().to_string(),
                a.applies.to_string(),
                format_number(a.t0),
                a.t_h.map(format_number).unwrap_or_default(),
                if a.t_h.is_some() { "open" } else { "closed" }.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Gnuplot script plotting `uy` against time for every receiver, with
/// one dashed line per phase when decomposed and arrival markers.
pub fn emit_gnuplot(cfg: &RunConfig, traces: &[Trace<f64>]) -> String {
    let mut s = String::new();
    s.push_str("set terminal pngcairo size 1000,600\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside right\n");
    s.push_str("set xlabel 't (s)'\nset ylabel 'u_y (m)'\n");
    if traces.is_empty() {
        s.push_str("# warning: no traces to plot\n");
        s.push_str(&format!("set output '{}_empty.png'\n", cfg.output.prefix));
        s.push_str("plot NaN notitle\n");
        return s;
    }
    for (i, trace) in traces.iter().enumerate() {
        let file = trace_file_name(cfg, i);
        let stem = file.trim_end_matches(".csv");
        let _ = writeln!(
            s,
            "\n# receiver ({}, {})",
            format_number(trace.receiver.x),
            format_number(trace.receiver.y)
        );
        let _ = writeln!(s, "set output '{stem}.png'");
        let _ = writeln!(
            s,
            "set title 'receiver ({}, {})' noenhanced",
            format_number(trace.receiver.x),
            format_number(trace.receiver.y)
        );
        s.push_str("unset arrow\n");
        for (phase, a) in trace.arrivals.iter().filter(|(_, a)| a.applies) {
            let t = a.onset();
            if t >= cfg.grid.t_start && t <= cfg.grid.t_end {
                let _ = writeln!(
                    s,
                    "set arrow from {t}, graph 0 to {t}, graph 1 nohead dashtype 3 lc rgb 'gray' # {}",
                    phase.name(),
                    t = format_number(t)
                );
            }
        }
        let mut lines = vec![format!(
            "'{file}' using 1:3 with lines lw 2 lc rgb 'black' title 'total'"
        )];
        if cfg.output.decompose {
            for (k, (phase, _)) in trace.channels.iter().enumerate() {
                if phase.applies_to(&trace.receiver) {
                    let col = 5 + 2 * k;
                    lines.push(format!(
                        "'{file}' using 1:{col} with lines dashtype 2 lc {} title '{}' noenhanced",
                        k + 1,
                        phase.name()
                    ));
                }
            }
        }
        let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    }
    s
}

/// Computes every receiver and writes CSVs, the manifest and optionally
/// the gnuplot script into `cfg.output.dir`.
pub fn run_campaign(cfg: &RunConfig) -> Result<CampaignOutput> {
    let traces = compute_traces(cfg)?;
    write_campaign(cfg, &traces)
}

pub fn write_campaign(cfg: &RunConfig, traces: &[Trace<f64>]) -> Result<CampaignOutput> {
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir)?;
    let files = traces
        .par_iter()
        .enumerate()
        .map(|(i, trace)| {
            let path = dir.join(trace_file_name(cfg, i));
            write_trace_csv(&path, trace, cfg.output.decompose)?;
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = dir.join(format!("{}_manifest.csv", cfg.output.prefix));
    write_manifest(&manifest, traces)?;
    let gnuplot = if cfg.output.gnuplot {
        let path = dir.join(format!("{}.gp", cfg.output.prefix));
        fs::write(&path, emit_gnuplot(cfg, traces))?;
        Some(path)
    } else {
        None
    };
    Ok(CampaignOutput {
        traces: files,
        manifest,
        gnuplot,
    })
}

/// Phase column pairs of a decomposed CSV header, in file order.
pub fn phase_columns() -> Vec<String> {
    WavePhase::ALL
        .iter()
        .flat_map(|p| [format!("ux_{}", p.name()), format!("uy_{}", p.name())])
        .collect()
}
