//! Server workload estimate and its breakdown by filtering stage.
//!
//! Every request is assumed to occupy the server for a fixed `ds` seconds.
//! The load sampled at minute `m` is the number of requests whose timestamp
//! lies in the half-open window `(60·m − ds, 60·m]`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::blocklist::BlockEntry;
use crate::hierarchy::Hierarchy;
use crate::ingest::{self, AccessRecord};
use crate::policy::Trigger;
use crate::subnet::{EntityKey, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadConfig {
    /// Seconds each request keeps the server busy.
    pub ds: u32,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        WorkloadConfig { ds: 60 }
    }
}

/// Range of minute samples, as minutes since the epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Grid {
    pub start_minute: i64,
    pub len: usize,
}

impl Grid {
    /// The smallest grid whose windows hold every timestamp in `[first, last]`.
    pub fn covering(first: i64, last: i64, cfg: &WorkloadConfig) -> Grid {
        let start = first.div_euclid(60) + i64::from(first.rem_euclid(60) != 0);
        let end = (last + i64::from(cfg.ds) - 1).div_euclid(60);
        Grid {
            start_minute: start,
            len: (end - start + 1).max(0) as usize,
        }
    }

    pub fn for_timestamps(sorted: &[i64], cfg: &WorkloadConfig) -> Grid {
        match (sorted.first(), sorted.last()) {
            (Some(&a), Some(&b)) => Grid::covering(a, b, cfg),
            _ => Grid::default(),
        }
    }

    pub fn sample_time(&self, i: usize) -> i64 {
        (self.start_minute + i as i64) * 60
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadSeries {
    pub grid: Grid,
    pub values: Vec<u32>,
}

impl LoadSeries {
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.values.iter().map(|&v| f64::from(v)).sum::<f64>() / self.values.len() as f64
        }
    }
}

/// Load on `grid` from sorted timestamps.
pub fn load_on_grid(sorted: &[i64], grid: Grid, cfg: &WorkloadConfig) -> LoadSeries {
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let ds = i64::from(cfg.ds);
    let mut lo = 0;
    let mut hi = 0;
    let values = (0..grid.len)
        .map(|i| {
            let t = grid.sample_time(i);
            while hi < sorted.len() && sorted[hi] <= t {
                hi += 1;
            }
            while lo < hi && sorted[lo] <= t - ds {
                lo += 1;
            }
            (hi - lo) as u32
        })
        .collect();
    LoadSeries { grid, values }
}

/// Load series of time-sorted records over their own grid.
pub fn load_series(records: &[AccessRecord], cfg: &WorkloadConfig) -> LoadSeries {
    let stamps: Vec<i64> = records.iter().map(|r| r.timestamp).collect();
    load_on_grid(&stamps, Grid::for_timestamps(&stamps, cfg), cfg)
}

/// Filtering stages, in the order they are credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Throttling,
    Consecutive,
    DailyRange,
    DailyMax,
    Robots,
    CSubnet,
    BSubnet,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Throttling,
        Stage::Consecutive,
        Stage::DailyRange,
        Stage::DailyMax,
        Stage::Robots,
        Stage::CSubnet,
        Stage::BSubnet,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Stage::Throttling => "Throttling",
            Stage::Consecutive => "Consecutive",
            Stage::DailyRange => "Daily range",
            Stage::DailyMax => "Daily max",
            Stage::Robots => "Robots",
            Stage::CSubnet => "C Subnet",
            Stage::BSubnet => "B Subnet",
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Stage::Throttling => "throttling",
            Stage::Consecutive => "consecutive",
            Stage::DailyRange => "daily_range",
            Stage::DailyMax => "daily_max",
            Stage::Robots => "robots",
            Stage::CSubnet => "c_subnet",
            Stage::BSubnet => "b_subnet",
        }
    }

    fn for_ip_trigger(t: Trigger) -> Option<Stage> {
        match t {
            Trigger::SmartThrottle => Some(Stage::Throttling),
            Trigger::Consecutive => Some(Stage::Consecutive),
            Trigger::DailyRange => Some(Stage::DailyRange),
            Trigger::DailyTotal => Some(Stage::DailyMax),
            Trigger::Robots => Some(Stage::Robots),
            Trigger::SubnetCount => None,
        }
    }

    pub fn is_ip_stage(self) -> bool {
        self < Stage::CSubnet
    }
}

/// First stage that removes each record, or `None` if it is never blocked.
pub fn record_stages(records: &[AccessRecord], h: &Hierarchy) -> Vec<Option<Stage>> {
    records
        .iter()
        .map(|r| {
            let addr = r.ip_u32();
            let ip_stage = h
                .ip
                .verdicts
                .get(&EntityKey::new(Level::Ip, addr))
                .filter(|v| v.blocked)
                .and_then(|v| v.triggers.iter().filter_map(Stage::for_ip_trigger).min());
            if ip_stage.is_some() {
                ip_stage
            } else if h.c.is_blocked(&EntityKey::new(Level::C, addr)) {
                Some(Stage::CSubnet)
            } else if h.b.is_blocked(&EntityKey::new(Level::B, addr)) {
                Some(Stage::BSubnet)
            } else {
                None
            }
        })
        .collect()
}

/// Whether the address is covered by any entry of a finalized blocklist.
pub fn covered_by(entries: &[BlockEntry]) -> impl Fn(u32) -> bool {
    let keys: HashSet<EntityKey> = entries
        .iter()
        .map(|e| EntityKey::new(e.level, e.cidr.addr()))
        .collect();
    move |addr| {
        [Level::Ip, Level::C, Level::B]
            .iter()
            .any(|&l| keys.contains(&EntityKey::new(l, addr)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRow {
    pub name: &'static str,
    pub stage: Option<Stage>,
    /// Mean active requests per minute after this stage.
    pub workload: f64,
    pub stage_pct: f64,
    pub cumulative_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageTable {
    /// `None` baseline row first, then one row per [`Stage`].
    pub rows: Vec<StageRow>,
    pub baseline: LoadSeries,
    /// Remaining load after each stage, cumulatively, in [`Stage::ALL`] order.
    pub after: Vec<LoadSeries>,
    /// Remaining load computed directly from the finalized blocklist.
    pub final_load: LoadSeries,
}

impl StageTable {
    pub fn final_cumulative_pct(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cumulative_pct)
    }

    pub fn row(&self, stage: Stage) -> &StageRow {
        &self.rows[1 + stage as usize]
    }

    pub fn after(&self, stage: Stage) -> &LoadSeries {
        &self.after[stage as usize]
    }

    /// Per-minute CSV with the baseline, the load after every stage and the
    /// final load. `minute` counts minutes since the epoch.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("minute,time,baseline");
        for s in Stage::ALL {
            let _ = write!(out, ",after_{}", s.column());
        }
        out.push_str(",final\n");
        let grid = self.baseline.grid;
        for i in 0..grid.len {
            let _ = write!(
                out,
                "{},{},{}",
                grid.start_minute + i as i64,
                ingest::format_timestamp(grid.sample_time(i)),
                self.baseline.values[i]
            );
            for s in &self.after {
                let _ = write!(out, ",{}", s.values[i]);
            }
            let _ = writeln!(out, ",{}", self.final_load.values[i]);
        }
        out
    }
}

impl fmt::Display for StageTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>10} {:>8} {:>13}",
            "Filter", "Workload", "Stage %", "Cumulative %"
        )?;
        for row in &self.rows {
            if row.stage.is_none() {
                writeln!(f, "{:<12} {:>10.2}", row.name, row.workload)?;
            } else {
                writeln!(
                    f,
                    "{:<12} {:>10.2} {:>7.1}% {:>12.1}%",
                    row.name, row.workload, row.stage_pct, row.cumulative_pct
                )?;
            }
        }
        Ok(())
    }
}

/// Workload after each filtering stage. `records` must be time-sorted.
pub fn stage_table(
    records: &[AccessRecord],
    h: &Hierarchy,
    entries: &[BlockEntry],
    cfg: &WorkloadConfig,
) -> StageTable {
    let stamps: Vec<i64> = records.iter().map(|r| r.timestamp).collect();
    let grid = Grid::for_timestamps(&stamps, cfg);
    let baseline = load_on_grid(&stamps, grid, cfg);
    let stages = record_stages(records, h);

    let after: Vec<LoadSeries> = Stage::ALL
        .iter()
        .map(|&s| {
            let kept: Vec<i64> = stamps
                .iter()
                .zip(&stages)
                .filter(|(_, st)| st.is_none_or(|st| st > s))
                .map(|(t, _)| *t)
                .collect();
            load_on_grid(&kept, grid, cfg)
        })
        .collect();

    let covered = covered_by(entries);
    let unblocked: Vec<i64> = records
        .iter()
        .filter(|r| !covered(r.ip_u32()))
        .map(|r| r.timestamp)
        .collect();
    let final_load = load_on_grid(&unblocked, grid, cfg);

    let base = baseline.mean();
    let pct = |x: f64| if base > 0.0 { 100.0 * x / base } else { 0.0 };
    let mut rows = vec![StageRow {
        name: "None",
        stage: None,
        workload: base,
        stage_pct: 0.0,
        cumulative_pct: 0.0,
    }];
    let mut prev = base;
    for (s, series) in Stage::ALL.iter().zip(&after) {
        let cur = series.mean();
        rows.push(StageRow {
            name: s.label(),
            stage: Some(*s),
            workload: cur,
            stage_pct: pct(prev - cur),
            cumulative_pct: pct(base - cur),
        });
        prev = cur;
    }

    StageTable {
        rows,
        baseline,
        after,
        final_load,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocklist;
    use crate::hierarchy::run_hierarchy;
    use crate::policy::PolicyParams;
    use proptest::prelude::*;
    use std::net::Ipv4Addr;

    fn brute_force(stamps: &[i64], grid: Grid, ds: u32) -> Vec<u32> {
        (0..grid.len)
            .map(|i| {
                let t = grid.sample_time(i);
                stamps
                    .iter()
                    .filter(|&&s| s > t - i64::from(ds) && s <= t)
                    .count() as u32
            })
            .collect()
    }

    #[test]
    fn small_window_example() {
        let cfg = WorkloadConfig::default();
        let stamps = [0, 30, 90];
        let grid = Grid::for_timestamps(&stamps, &cfg);
        assert_eq!(grid.start_minute, 0);
        let s = load_on_grid(&stamps, grid, &cfg);
        assert_eq!(s.values, vec![1, 1, 1]);
    }

    #[test]
    fn empty_series() {
        let s = load_series(&[], &WorkloadConfig::default());
        assert!(s.values.is_empty());
        assert_eq!(s.mean(), 0.0);
    }

    #[test]
    fn repeated_second_is_one_sample() {
        let cfg = WorkloadConfig::default();
        for t in [1_700_000_000i64, 1_700_000_030] {
            let stamps = vec![t; 100];
            let s = load_on_grid(&stamps, Grid::for_timestamps(&stamps, &cfg), &cfg);
            assert_eq!(s.values, vec![100]);
        }
    }

    #[test]
    fn no_blocks_means_no_reduction() {
        let records: Vec<AccessRecord> = (0..20)
            .map(|k| AccessRecord::new(1_736_640_000 + k * 300, Ipv4Addr::new(10, 0, 0, 1)))
            .collect();
        let h = run_hierarchy(&records, &PolicyParams::default());
        let entries = blocklist::finalize(&h);
        assert!(entries.is_empty());
        let table = stage_table(&records, &h, &entries, &WorkloadConfig::default());
        assert_eq!(table.rows.len(), 8);
        for row in &table.rows {
            assert_eq!(row.stage_pct, 0.0);
            assert_eq!(row.cumulative_pct, 0.0);
        }
    }

    #[test]
    fn throttled_everything() {
        // one address, 60 hits in a single minute on each of two days
        let mut records = Vec::new();
        for d in 0..2 {
            for s in 0..60 {
                records.push(AccessRecord::new(
                    1_736_640_000 + d * 86_400 + 3600 + s,
                    Ipv4Addr::new(10, 0, 0, 1),
                ));
            }
        }
        let h = run_hierarchy(&records, &PolicyParams::default());
        let entries = blocklist::finalize(&h);
        let table = stage_table(&records, &h, &entries, &WorkloadConfig::default());
        assert!((table.row(Stage::Throttling).stage_pct - 100.0).abs() < 1e-9);
        for s in &Stage::ALL[1..] {
            assert_eq!(table.row(*s).stage_pct, 0.0);
        }
        assert!((table.final_cumulative_pct() - 100.0).abs() < 1e-9);
        assert!(table.final_load.values.iter().all(|&v| v == 0));
    }

    proptest! {
        #[test]
        fn matches_brute_force(mut stamps in proptest::collection::vec(0i64..20_000, 0..300), ds in 1u32..400) {
            stamps.sort();
            let cfg = WorkloadConfig { ds };
            let grid = Grid::for_timestamps(&stamps, &cfg);
            let fast = load_on_grid(&stamps, grid, &cfg);
            prop_assert_eq!(&fast.values, &brute_force(&stamps, grid, ds));
            // with ds = 60 every request lands in exactly one window
            if ds == 60 {
                prop_assert_eq!(fast.values.iter().map(|&v| v as usize).sum::<usize>(), stamps.len());
            }
        }
    }
}
