//! PNG scatter plots of traffic and the layered loading graph.
//!
//! Plots carry axes, one vertical guide per midnight and horizontal guides
//! at tenths of the y range. There is no text; each image is a pure function
//! of its input, so identical data gives identical bytes.

use std::path::Path;

use image::{ImageFormat, Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::ingest::AccessRecord;
use crate::workload::Stage;

pub const RED: Rgb<u8> = Rgb([220, 30, 30]);
pub const PURPLE: Rgb<u8> = Rgb([150, 40, 190]);
pub const BLUE: Rgb<u8> = Rgb([40, 90, 230]);
pub const GREEN: Rgb<u8> = Rgb([30, 235, 60]);
pub const GRAY: Rgb<u8> = Rgb([160, 160, 160]);
const WHITE: Rgb<u8> = Rgb([255, 255, 255]);
const AXIS: Rgb<u8> = Rgb([40, 40, 40]);
const GUIDE: Rgb<u8> = Rgb([232, 232, 232]);

const MARGIN_LEFT: u32 = 50;
const MARGIN_RIGHT: u32 = 20;
const MARGIN_TOP: u32 = 20;
const MARGIN_BOTTOM: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YAxis {
    /// Position of the address among all distinct observed addresses.
    #[default]
    Rank,
    /// Raw 32-bit address value.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub y_axis: YAxis,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            width: 1600,
            height: 900,
            y_axis: YAxis::Rank,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Allowed,
    BlockedIp,
    BlockedC,
    BlockedB,
}

impl PointClass {
    pub fn color(self) -> Rgb<u8> {
        match self {
            PointClass::Allowed => GREEN,
            PointClass::BlockedIp => RED,
            PointClass::BlockedC => PURPLE,
            PointClass::BlockedB => BLUE,
        }
    }

    pub fn from_stage(stage: Option<Stage>) -> PointClass {
        match stage {
            None => PointClass::Allowed,
            Some(Stage::CSubnet) => PointClass::BlockedC,
            Some(Stage::BSubnet) => PointClass::BlockedB,
            Some(_) => PointClass::BlockedIp,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointClass::Allowed => "allowed",
            PointClass::BlockedIp => "blocked_ip",
            PointClass::BlockedC => "blocked_c",
            PointClass::BlockedB => "blocked_b",
        }
    }

    pub fn from_name(s: &str) -> Option<PointClass> {
        [
            PointClass::Allowed,
            PointClass::BlockedIp,
            PointClass::BlockedC,
            PointClass::BlockedB,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }

    pub fn is_blocked(self) -> bool {
        self != PointClass::Allowed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScatterPoint {
    pub timestamp: i64,
    pub ip: u32,
    pub class: PointClass,
}

pub fn scatter_points(records: &[AccessRecord], classes: &[PointClass]) -> Vec<ScatterPoint> {
    records
        .iter()
        .zip(classes)
        .map(|(r, &class)| ScatterPoint {
            timestamp: r.timestamp,
            ip: r.ip_u32(),
            class,
        })
        .collect()
}

/// Which points a scatter plot shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatterView {
    Blocked,
    Filtered,
}

impl ScatterView {
    fn shows(self, class: PointClass) -> bool {
        match self {
            ScatterView::Blocked => class.is_blocked(),
            ScatterView::Filtered => !class.is_blocked(),
        }
    }
}

pub struct Rendered {
    pub image: RgbImage,
    /// Number of points drawn.
    pub points: usize,
}

struct Frame {
    x0: u32,
    y0: u32,
    w: u32,
    h: u32,
}

impl Frame {
    fn new(spec: &PlotSpec) -> Frame {
        let w = spec.width.saturating_sub(MARGIN_LEFT + MARGIN_RIGHT).max(1);
        let h = spec.height.saturating_sub(MARGIN_TOP + MARGIN_BOTTOM).max(1);
        Frame {
            x0: MARGIN_LEFT,
            y0: MARGIN_TOP,
            w,
            h,
        }
    }

    /// Pixel for fractional plot coordinates, y measured upwards.
    fn pixel(&self, fx: f64, fy: f64) -> (u32, u32) {
        let px = self.x0 + ((fx.clamp(0.0, 1.0) * f64::from(self.w - 1)).round() as u32);
        let py = self.y0 + self.h - 1 - ((fy.clamp(0.0, 1.0) * f64::from(self.h - 1)).round() as u32);
        (px, py)
    }
}

fn blank(spec: &PlotSpec) -> RgbImage {
    RgbImage::from_pixel(spec.width.max(1), spec.height.max(1), WHITE)
}

fn put(img: &mut RgbImage, x: u32, y: u32, c: Rgb<u8>) {
    if x < img.width() && y < img.height() {
        img.put_pixel(x, y, c);
    }
}

fn draw_axes(img: &mut RgbImage, f: &Frame, day_fractions: &[f64]) {
    for k in 1..10 {
        let (_, y) = f.pixel(0.0, f64::from(k) / 10.0);
        for x in f.x0..f.x0 + f.w {
            put(img, x, y, GUIDE);
        }
    }
    for &fx in day_fractions {
        let (x, _) = f.pixel(fx, 0.0);
        for y in f.y0..f.y0 + f.h {
            put(img, x, y, GUIDE);
        }
        for y in f.y0 + f.h..f.y0 + f.h + 6 {
            put(img, x, y, AXIS);
        }
    }
    for y in f.y0..f.y0 + f.h + 1 {
        put(img, f.x0.saturating_sub(1), y, AXIS);
    }
    for x in f.x0.saturating_sub(1)..f.x0 + f.w {
        put(img, x, f.y0 + f.h, AXIS);
    }
}

/// Time span rounded out to whole days, and the midnights inside it as
/// fractions of the span.
fn day_span(first: i64, last: i64) -> (i64, i64, Vec<f64>) {
    let t0 = first.div_euclid(86_400) * 86_400;
    let t1 = (last.div_euclid(86_400) + 1) * 86_400;
    let span = (t1 - t0) as f64;
    let days = ((t1 - t0) / 86_400) as usize;
    let fractions = (0..=days).map(|d| (d as f64 * 86_400.0) / span).collect();
    (t0, t1, fractions)
}

/// Scatter of time (x) against source address (y) for the points `view`
/// selects. Ranks come from all points so both views share one y scale.
pub fn render_scatter(points: &[ScatterPoint], view: ScatterView, spec: &PlotSpec) -> Rendered {
    let mut img = blank(spec);
    let frame = Frame::new(spec);
    let (Some(first), Some(last)) = (
        points.iter().map(|p| p.timestamp).min(),
        points.iter().map(|p| p.timestamp).max(),
    ) else {
        draw_axes(&mut img, &frame, &[]);
        return Rendered {
            image: img,
            points: 0,
        };
    };
    let (t0, t1, days) = day_span(first, last);
    draw_axes(&mut img, &frame, &days);

    let mut ips: Vec<u32> = points.iter().map(|p| p.ip).collect();
    ips.sort_unstable();
    ips.dedup();
    let y_of = |ip: u32| -> f64 {
        match spec.y_axis {
            YAxis::Rank => {
                let rank = ips.binary_search(&ip).unwrap_or(0);
                if ips.len() > 1 {
                    rank as f64 / (ips.len() - 1) as f64
                } else {
                    0.5
                }
            }
            YAxis::Raw => f64::from(ip) / f64::from(u32::MAX),
        }
    };

    let mut drawn = 0;
    for p in points.iter().filter(|p| view.shows(p.class)) {
        let fx = (p.timestamp - t0) as f64 / (t1 - t0) as f64;
        let (x, y) = frame.pixel(fx, y_of(p.ip));
        let c = p.class.color();
        put(&mut img, x, y, c);
        put(&mut img, x + 1, y, c);
        put(&mut img, x, y.saturating_sub(1), c);
        put(&mut img, x + 1, y.saturating_sub(1), c);
        drawn += 1;
    }
    Rendered {
        image: img,
        points: drawn,
    }
}

/// Per-minute load layers, each no larger than the one before it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadLayers {
    /// Minutes since the epoch of the first sample.
    pub start_minute: i64,
    pub baseline: Vec<u32>,
    pub after_ip: Vec<u32>,
    pub after_c: Vec<u32>,
    pub final_load: Vec<u32>,
}

impl LoadLayers {
    fn layers(&self) -> [(&[u32], Rgb<u8>); 4] {
        [
            (&self.baseline, GRAY),
            (&self.after_ip, PURPLE),
            (&self.after_c, BLUE),
            (&self.final_load, GREEN),
        ]
    }

    /// Check every layer has the baseline's length and never exceeds the
    /// layer beneath it.
    pub fn check_dominance(&self) -> Result<()> {
        let layers = self.layers();
        for pair in layers.windows(2) {
            let (below, above) = (pair[0].0, pair[1].0);
            if below.len() != above.len() {
                return Err(Error::Invalid("load layers differ in length".into()));
            }
            if let Some(i) = below.iter().zip(above).position(|(b, a)| a > b) {
                return Err(Error::Invalid(format!(
                    "load layer exceeds the layer beneath it at sample {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Layered area chart of load over time: baseline gray, load left after the
/// address stages purple, after the /24 stage blue, final load green.
pub fn render_load(layers: &LoadLayers, spec: &PlotSpec) -> Result<RgbImage> {
    layers.check_dominance()?;
    let mut img = blank(spec);
    let frame = Frame::new(spec);
    let n = layers.baseline.len();
    if n == 0 {
        draw_axes(&mut img, &frame, &[]);
        return Ok(img);
    }
    let first = layers.start_minute * 60;
    let last = first + (n as i64 - 1) * 60;
    // a sample stamped at midnight counts the minute before it
    let (t0, t1, days) = day_span(first, (last - 1).max(first));
    draw_axes(&mut img, &frame, &days);

    let sample_frac = |i: usize| ((first + i as i64 * 60) - t0) as f64 / (t1 - t0) as f64;
    let (x_first, _) = frame.pixel(sample_frac(0), 0.0);
    let (x_last, _) = frame.pixel(sample_frac(n - 1), 0.0);
    let columns = (x_last - x_first + 1) as usize;
    // mean of the samples falling in each pixel column; means keep layer order
    let column = |series: &[u32], c: usize| -> f64 {
        let lo = c * n / columns;
        let hi = ((c + 1) * n / columns).max(lo + 1).min(n);
        series[lo..hi].iter().map(|&v| f64::from(v)).sum::<f64>() / (hi - lo) as f64
    };
    let peak = (0..columns)
        .map(|c| column(&layers.baseline, c))
        .fold(0.0f64, f64::max)
        .max(1.0);

    let (_, bottom) = frame.pixel(0.0, 0.0);
    for (series, color) in layers.layers() {
        for c in 0..columns {
            let v = column(series, c);
            if v <= 0.0 {
                continue;
            }
            let (_, top) = frame.pixel(0.0, v / peak);
            for y in top..=bottom {
                put(&mut img, x_first + c as u32, y, color);
            }
        }
    }
    Ok(img)
}

pub fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    img.save_with_format(path, ImageFormat::Png)
        .map_err(|e| Error::Image {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
}
