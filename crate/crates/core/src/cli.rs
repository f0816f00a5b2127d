//! Subcommand implementations behind the `logsieve` binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};

use crate::blocklist::{self, BlockEntry, SubnetReport};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hierarchy::{run_hierarchy, Hierarchy};
use crate::ingest::{self, AccessRecord, ParseReport};
use crate::policy::PolicyParams;
use crate::subnet::Level;
use crate::synthgen::{self, Region, SynthOptions};
use crate::visualize::{self, LoadLayers, PlotSpec, PointClass, ScatterPoint, ScatterView};
use crate::workload::{self, Stage, StageTable, WorkloadConfig};

/// Files written by [`cmd_analyze`], in write order.
pub const ARTIFACTS: [&str; 7] = [
    "blocklist.txt",
    "subnets_c.csv",
    "subnets_b.csv",
    "blocked.png",
    "filtered.png",
    "loading.png",
    "workload.csv",
];

/// Per-record classification kept for `render`.
pub const CLASSIFIED_FILE: &str = "classified.csv";

/// Everything computed from one set of records.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub records: Vec<AccessRecord>,
    pub hierarchy: Hierarchy,
    pub entries: Vec<BlockEntry>,
    pub c_reports: Vec<SubnetReport>,
    pub b_reports: Vec<SubnetReport>,
    /// First stage removing each record, parallel to `records`.
    pub stages: Vec<Option<Stage>>,
    pub table: StageTable,
}

impl Analysis {
    /// `records` must be sorted by timestamp, as [`ingest::parse_log`] returns them.
    pub fn run(records: Vec<AccessRecord>, params: &PolicyParams, cfg: &WorkloadConfig) -> Analysis {
        let hierarchy = run_hierarchy(&records, params);
        let entries = blocklist::finalize(&hierarchy);
        let c_reports = blocklist::subnet_reports(&hierarchy.c);
        let b_reports = blocklist::subnet_reports(&hierarchy.b);
        let stages = workload::record_stages(&records, &hierarchy);
        let table = workload::stage_table(&records, &hierarchy, &entries, cfg);
        Analysis {
            records,
            hierarchy,
            entries,
            c_reports,
            b_reports,
            stages,
            table,
        }
    }

    pub fn points(&self) -> Vec<ScatterPoint> {
        let classes: Vec<PointClass> = self.stages.iter().map(|s| PointClass::from_stage(*s)).collect();
        visualize::scatter_points(&self.records, &classes)
    }

    pub fn load_layers(&self) -> LoadLayers {
        let t = &self.table;
        LoadLayers {
            start_minute: t.baseline.grid.start_minute,
            baseline: t.baseline.values.clone(),
            after_ip: t.after(Stage::Robots).values.clone(),
            after_c: t.after(Stage::CSubnet).values.clone(),
            final_load: t.final_load.values.clone(),
        }
    }

    /// Write the seven artifacts plus [`CLASSIFIED_FILE`] into `dir`.
    pub fn write(&self, dir: &Path, plot: &PlotSpec) -> Result<()> {
        blocklist::write_outputs(&self.entries, &self.c_reports, &self.b_reports, dir)?;
        let points = self.points();
        write_plots(&points, &self.load_layers(), dir, plot)?;
        write_file(&dir.join("workload.csv"), &self.table.to_csv())?;
        write_file(&dir.join(CLASSIFIED_FILE), &classified_csv(&points))
    }

    pub fn summary(&self, report_lines: usize, skipped: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "lines read:      {report_lines}");
        let _ = writeln!(out, "records parsed:  {}", self.records.len());
        let _ = writeln!(out, "lines skipped:   {skipped}");
        for level in [Level::Ip, Level::C, Level::B] {
            let l = self.hierarchy.level(level);
            let _ = writeln!(
                out,
                "{:<3} entities:    {} ({} blocked)",
                level.name(),
                l.timelines.len(),
                l.blocked().count()
            );
        }
        let _ = writeln!(out, "blocklist lines: {}", self.entries.len());
        let blocked = self.stages.iter().filter(|s| s.is_some()).count();
        let _ = writeln!(out, "hits blocked:    {blocked}");
        out.push('\n');
        let _ = write!(out, "{}", self.table);
        out
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_plots(points: &[ScatterPoint], layers: &LoadLayers, dir: &Path, plot: &PlotSpec) -> Result<()> {
    let blocked = visualize::render_scatter(points, ScatterView::Blocked, plot);
    visualize::save_png(&blocked.image, &dir.join("blocked.png"))?;
    let filtered = visualize::render_scatter(points, ScatterView::Filtered, plot);
    visualize::save_png(&filtered.image, &dir.join("filtered.png"))?;
    let load = visualize::render_load(layers, plot)?;
    visualize::save_png(&load, &dir.join("loading.png"))
}

fn classified_csv(points: &[ScatterPoint]) -> String {
    let mut out = String::from("timestamp,ip,class\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.timestamp, Ipv4Addr::from(p.ip), p.class.name());
    }
    out
}

fn bad_row(path: &Path, line: usize) -> Error {
    Error::Invalid(format!("{}: malformed row at line {line}", path.display()))
}

fn read_classified(path: &Path) -> Result<Vec<ScatterPoint>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let mut f = line.split(',');
        let (Some(ts), Some(ip), Some(class), None) = (f.next(), f.next(), f.next(), f.next()) else {
            return Err(bad_row(path, i + 1));
        };
        points.push(ScatterPoint {
            timestamp: ts.parse().map_err(|_| bad_row(path, i + 1))?,
            ip: u32::from(ip.parse::<Ipv4Addr>().map_err(|_| bad_row(path, i + 1))?),
            class: PointClass::from_name(class).ok_or_else(|| bad_row(path, i + 1))?,
        });
    }
    Ok(points)
}

fn read_workload(path: &Path) -> Result<LoadLayers> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::Invalid(format!("{}: no `{name}` column", path.display())))
    };
    let minute = col("minute")?;
    let cols = [
        col("baseline")?,
        col(&format!("after_{}", Stage::Robots.column()))?,
        col(&format!("after_{}", Stage::CSubnet.column()))?,
        col("final")?,
    ];
    let mut layers = LoadLayers::default();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let get = |c: usize| fields.get(c).and_then(|v| v.parse::<i64>().ok()).ok_or_else(|| bad_row(path, i + 2));
        if i == 0 {
            layers.start_minute = get(minute)?;
        }
        let [b, ip, c, f] = cols;
        layers.baseline.push(get(b)? as u32);
        layers.after_ip.push(get(ip)? as u32);
        layers.after_c.push(get(c)? as u32);
        layers.final_load.push(get(f)? as u32);
    }
    Ok(layers)
}

/// Parse `inputs` with the configured format, score them and write every
/// artifact into `out`. A summary goes to `stdout`.
pub fn cmd_analyze(cfg: &RunConfig, inputs: &[PathBuf], out: &Path, stdout: &mut dyn Write) -> Result<Analysis> {
    let spec = cfg.require_format()?;
    if inputs.is_empty() {
        return Err(Error::Invalid("no input log files given".into()));
    }
    let ParseReport {
        records,
        skipped,
        skipped_lines,
    } = ingest::parse_files(spec, inputs)?;
    let lines = records.len() + skipped;
    let analysis = Analysis::run(records, &cfg.params, &cfg.workload);
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    analysis.write(out, &cfg.plot)?;

    let mut summary = analysis.summary(lines, skipped);
    if !skipped_lines.is_empty() {
        let shown: Vec<String> = skipped_lines.iter().take(10).map(|n| n.to_string()).collect();
        let _ = writeln!(summary, "\nfirst skipped lines: {}", shown.join(", "));
    }
    stdout
        .write_all(summary.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(analysis)
}

/// Write `corpus.log` and `labels.csv` into `out`.
pub fn cmd_synth(cfg: &RunConfig, regions: &[Region], humans: usize, seed: u64, out: &Path) -> Result<()> {
    let corpus = synthgen::generate_with(&SynthOptions {
        regions: regions.to_vec(),
        humans,
        seed,
        format: cfg.log_format.clone(),
    });
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    write_file(&out.join("corpus.log"), &corpus.log_text())?;
    write_file(&out.join("labels.csv"), &corpus.labels_csv())
}

/// Redraw the three plots in `dir` from `classified.csv` and `workload.csv`.
pub fn cmd_render(cfg: &RunConfig, dir: &Path) -> Result<()> {
    let points = read_classified(&dir.join(CLASSIFIED_FILE))?;
    let layers = read_workload(&dir.join("workload.csv"))?;
    write_plots(&points, &layers, dir, &cfg.plot)
}
