//! Per-entity visit timelines binned into calendar days.

use std::collections::{BTreeMap, HashMap};
use std::net::Ipv4Addr;

use chrono::NaiveDate;

use crate::ingest::{self, AccessRecord};
use crate::subnet::{EntityKey, Level};

/// Statistics for one entity on one calendar day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayStats {
    /// Days since 1970-01-01.
    pub day: i64,
    pub hits: u32,
    /// Seconds since midnight of the first and last hit.
    pub first: u32,
    pub last: u32,
    /// Longest pause between two consecutive hits, in seconds.
    pub largest_gap: u32,
    /// `(last - first) - largest_gap`, in seconds.
    pub effective_range_secs: u32,
    /// Most hits inside a single clock minute.
    pub peak_ppm: u32,
}

impl DayStats {
    pub fn date(&self) -> NaiveDate {
        ingest::date_of_day(self.day)
    }

    pub fn effective_range_minutes(&self) -> f64 {
        f64::from(self.effective_range_secs) / 60.0
    }
}

/// Compute [`DayStats`] from the sorted timestamps of a single day.
///
/// # Panics
///
/// If `timestamps` is empty.
pub fn day_stats(timestamps: &[i64]) -> DayStats {
    let first_ts = *timestamps.first().expect("day_stats needs at least one hit");
    let last_ts = *timestamps.last().unwrap();
    debug_assert!(timestamps.windows(2).all(|w| w[0] <= w[1]));
    debug_assert_eq!(ingest::day_number(first_ts), ingest::day_number(last_ts));

    let largest_gap = timestamps
        .windows(2)
        .map(|w| (w[1] - w[0]) as u32)
        .max()
        .unwrap_or(0);

    let mut peak_ppm = 0u32;
    let mut run = 0u32;
    let mut minute = i64::MIN;
    for &ts in timestamps {
        let m = ts.div_euclid(60);
        if m == minute {
            run += 1;
        } else {
            minute = m;
            run = 1;
        }
        peak_ppm = peak_ppm.max(run);
    }

    let first = ingest::second_of_day(first_ts);
    let last = ingest::second_of_day(last_ts);
    DayStats {
        day: ingest::day_number(first_ts),
        hits: timestamps.len() as u32,
        first,
        last,
        largest_gap,
        effective_range_secs: (last - first).saturating_sub(largest_gap),
        peak_ppm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    pub timestamp: i64,
    pub ip: Ipv4Addr,
    /// Index of the originating record in the slice the timeline was built from.
    pub record: usize,
}

/// All visits of one IP or subnet, with per-day statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityTimeline {
    pub key: EntityKey,
    /// Strictly increasing by day.
    pub days: Vec<DayStats>,
    /// Number of distinct member addresses (1 at IP level).
    pub distinct_ips: u32,
    pub visits: Vec<Visit>,
    /// Whether any member requested `robots.txt`.
    pub robots_fetched: bool,
}

impl EntityTimeline {
    /// Build from visits that all belong to `key`.
    pub fn from_visits(key: EntityKey, mut visits: Vec<Visit>, robots_fetched: bool) -> Self {
        visits.sort_by_key(|v| v.timestamp);

        let mut days = Vec::new();
        let mut start = 0;
        let mut stamps: Vec<i64> = Vec::new();
        while start < visits.len() {
            let day = ingest::day_number(visits[start].timestamp);
            stamps.clear();
            let mut end = start;
            while end < visits.len() && ingest::day_number(visits[end].timestamp) == day {
                stamps.push(visits[end].timestamp);
                end += 1;
            }
            days.push(day_stats(&stamps));
            start = end;
        }

        let mut ips: Vec<Ipv4Addr> = visits.iter().map(|v| v.ip).collect();
        ips.sort_unstable();
        ips.dedup();

        EntityTimeline {
            key,
            days,
            distinct_ips: ips.len() as u32,
            visits,
            robots_fetched,
        }
    }

    pub fn total_hits(&self) -> u64 {
        self.visits.len() as u64
    }

    /// Average hits over days with at least one hit.
    pub fn ave_hits_per_day(&self) -> f64 {
        if self.days.is_empty() {
            0.0
        } else {
            self.total_hits() as f64 / self.days.len() as f64
        }
    }

    /// Calendar days from the first active day to the last, inclusive.
    pub fn span_days(&self) -> i64 {
        match (self.days.first(), self.days.last()) {
            (Some(a), Some(b)) => b.day - a.day + 1,
            _ => 0,
        }
    }

    /// Average hits over the whole calendar span, counting silent days.
    pub fn span_ave_hits_per_day(&self) -> f64 {
        match self.span_days() {
            0 => 0.0,
            n => self.total_hits() as f64 / n as f64,
        }
    }

    /// Longest run of calendar-adjacent days that all satisfy `pred`.
    pub fn max_consecutive_run(&self, pred: impl Fn(&DayStats) -> bool) -> usize {
        let mut best = 0;
        let mut run = 0;
        let mut prev_day = None;
        for d in &self.days {
            if pred(d) {
                run = if prev_day == Some(d.day - 1) { run + 1 } else { 1 };
                prev_day = Some(d.day);
                best = best.max(run);
            } else {
                run = 0;
                prev_day = None;
            }
        }
        best
    }

    /// Hits per member address, ascending by address.
    pub fn member_hits(&self) -> BTreeMap<Ipv4Addr, u64> {
        let mut out = BTreeMap::new();
        for v in &self.visits {
            *out.entry(v.ip).or_insert(0) += 1;
        }
        out
    }
}

/// Whether a requested page is a robots exclusion file.
pub fn is_robots_page(page: &str) -> bool {
    let path = page.split(['?', '#']).next().unwrap_or(page);
    path.rsplit('/').next() == Some("robots.txt")
}

/// Group records by their key at `level`.
///
/// Records are expected in time order; visits of one entity keep that order.
pub fn build_timelines(records: &[AccessRecord], level: Level) -> BTreeMap<EntityKey, EntityTimeline> {
    let mut groups: HashMap<EntityKey, (Vec<Visit>, bool)> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        let key = EntityKey::new(level, rec.ip_u32());
        let entry = groups.entry(key).or_default();
        entry.0.push(Visit {
            timestamp: rec.timestamp,
            ip: rec.ip,
            record: i,
        });
        if !entry.1 && rec.page.as_deref().is_some_and(is_robots_page) {
            entry.1 = true;
        }
    }
    groups
        .into_iter()
        .map(|(key, (visits, robots))| (key, EntityTimeline::from_visits(key, visits, robots)))
        .collect()
}
