//! Final blocklist with subnet override, and the subnet reports.
//!
//! A blocked /16 hides every blocked /24 and address inside it; a blocked /24
//! hides the blocked addresses inside it. Coverage is unchanged, only the
//! redundant entries disappear.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::net::Ipv4Addr;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, LevelResult};
use crate::policy::{MetricSummary, TriggerSet};
use crate::subnet::{Cidr, EntityKey, Level};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry {
    pub cidr: Cidr,
    pub level: Level,
    pub triggers: TriggerSet,
    pub distinct_ips: u32,
    pub total_hits: u64,
}

/// Drop keys covered by a blocked key at a coarser level and sort by
/// address, then prefix length. Level-A keys are ignored.
pub fn collapse(blocked: impl IntoIterator<Item = EntityKey>) -> Vec<EntityKey> {
    let blocked: Vec<EntityKey> = blocked
        .into_iter()
        .filter(|k| k.level() != Level::A)
        .collect();
    let coarse: HashSet<EntityKey> = blocked
        .iter()
        .filter(|k| matches!(k.level(), Level::B | Level::C))
        .copied()
        .collect();

    let mut kept: Vec<EntityKey> = blocked
        .into_iter()
        .filter(|k| {
            let covered_by = |level: Level| {
                level.prefix_len() < k.level().prefix_len() && coarse.contains(&k.parent(level))
            };
            !covered_by(Level::B) && !covered_by(Level::C)
        })
        .collect();
    kept.sort_by_key(|k| k.cidr());
    kept.dedup();
    kept
}

pub fn finalize(h: &Hierarchy) -> Vec<BlockEntry> {
    let levels = [&h.ip, &h.c, &h.b];
    let blocked = levels
        .iter()
        .flat_map(|l| l.blocked().map(|v| v.key));
    collapse(blocked)
        .into_iter()
        .map(|key| {
            let result = h.level(key.level());
            let timeline = &result.timelines[&key];
            BlockEntry {
                cidr: key.cidr(),
                level: key.level(),
                triggers: result.verdicts[&key].triggers,
                distinct_ips: timeline.distinct_ips,
                total_hits: timeline.total_hits(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubnetReport {
    pub cidr: Cidr,
    pub machines: u32,
    pub total_hits: u64,
    pub triggers: TriggerSet,
    pub metrics: MetricSummary,
    /// Member addresses with their hit counts; filled for /16 reports only.
    pub members: Vec<(Ipv4Addr, u64)>,
}

/// Reports for every blocked subnet at a C or B level result.
pub fn subnet_reports(result: &LevelResult) -> Vec<SubnetReport> {
    result
        .blocked()
        .map(|v| {
            let t = &result.timelines[&v.key];
            SubnetReport {
                cidr: v.key.cidr(),
                machines: t.distinct_ips,
                total_hits: t.total_hits(),
                triggers: v.triggers,
                metrics: v.metrics,
                members: if result.level == Level::B {
                    t.member_hits().into_iter().collect()
                } else {
                    Vec::new()
                },
            }
        })
        .collect()
}

pub const SUBNET_CSV_HEADER: &str = "cidr,machines,total_hits,triggers,active_days,ave_hits_per_day,span_ave_hits_per_day,min_daily_hits,max_daily_hits,min_daily_range_min,max_daily_range_min,ave_daily_range_min,min_peak_ppm,max_peak_ppm,consec_run_days";

pub fn blocklist_text(entries: &[BlockEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&e.cidr.to_blocklist_string());
        out.push('\n');
    }
    out
}

/// CSV for subnet reports. A `members` column (`ip:hits` pairs joined by
/// `;`) is appended when `with_members` is set.
pub fn subnet_csv(reports: &[SubnetReport], with_members: bool) -> String {
    let mut out = String::from(SUBNET_CSV_HEADER);
    if with_members {
        out.push_str(",members");
    }
    out.push('\n');
    for r in reports {
        let m = &r.metrics;
        let _ = write!(
            out,
            "{},{},{},{},{},{:.2},{:.2},{},{},{:.1},{:.1},{:.1},{},{},{}",
            r.cidr,
            r.machines,
            r.total_hits,
            r.triggers,
            m.active_days,
            m.ave_hits_per_day,
            m.span_ave_hits_per_day,
            m.daily_hits.min,
            m.daily_hits.max,
            m.daily_range_minutes.min,
            m.daily_range_minutes.max,
            m.ave_range_minutes,
            m.peak_ppm.min,
            m.peak_ppm.max,
            m.consec_run_days,
        );
        if with_members {
            out.push(',');
            for (i, (ip, hits)) in r.members.iter().enumerate() {
                if i > 0 {
                    out.push(';');
                }
                let _ = write!(out, "{ip}:{hits}");
            }
        }
        out.push('\n');
    }
    out
}

/// Write `blocklist.txt`, `subnets_c.csv` and `subnets_b.csv` into `dir`.
pub fn write_outputs(
    entries: &[BlockEntry],
    c_reports: &[SubnetReport],
    b_reports: &[SubnetReport],
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        ("blocklist.txt", blocklist_text(entries)),
        ("subnets_c.csv", subnet_csv(c_reports, false)),
        ("subnets_b.csv", subnet_csv(b_reports, true)),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
