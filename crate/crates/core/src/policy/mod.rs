//! Behavioral policies and per-entity verdicts.
//!
//! Each `eval_*` function checks one policy against a timeline in isolation.
//! [`score`] combines those that apply at the timeline's level.

mod params;

use std::fmt;

use crate::subnet::{EntityKey, Level};
use crate::timeline::{DayStats, EntityTimeline};

pub use params::PolicyParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trigger {
    SmartThrottle,
    DailyTotal,
    DailyRange,
    Consecutive,
    Robots,
    SubnetCount,
}

impl Trigger {
    pub const ALL: [Trigger; 6] = [
        Trigger::SmartThrottle,
        Trigger::DailyTotal,
        Trigger::DailyRange,
        Trigger::Consecutive,
        Trigger::Robots,
        Trigger::SubnetCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Trigger::SmartThrottle => "smart_throttle",
            Trigger::DailyTotal => "daily_total",
            Trigger::DailyRange => "daily_range",
            Trigger::Consecutive => "consecutive",
            Trigger::Robots => "robots",
            Trigger::SubnetCount => "subnet_count",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of triggers, iterated in declaration order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TriggerSet(u8);

impl TriggerSet {
    pub fn insert(&mut self, t: Trigger) {
        self.0 |= t.bit();
    }

    pub fn contains(&self, t: Trigger) -> bool {
        self.0 & t.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = Trigger> + '_ {
        Trigger::ALL.into_iter().filter(|t| self.contains(*t))
    }
}

impl FromIterator<Trigger> for TriggerSet {
    fn from_iter<I: IntoIterator<Item = Trigger>>(iter: I) -> Self {
        let mut set = TriggerSet::default();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

impl fmt::Display for TriggerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(t.name())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl Extrema {
    fn over(values: impl Iterator<Item = f64>) -> Extrema {
        values
            .fold(None, |acc: Option<Extrema>, v| {
                Some(match acc {
                    None => Extrema { min: v, max: v },
                    Some(e) => Extrema {
                        min: e.min.min(v),
                        max: e.max.max(v),
                    },
                })
            })
            .unwrap_or_default()
    }
}

/// Daily minimum and maximum of each per-day metric, plus whole-log figures.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSummary {
    pub daily_hits: Extrema,
    pub daily_range_minutes: Extrema,
    pub peak_ppm: Extrema,
    pub active_days: usize,
    pub ave_hits_per_day: f64,
    pub span_ave_hits_per_day: f64,
    /// Mean effective range over active days, minutes.
    pub ave_range_minutes: f64,
    /// Longest run of adjacent days above `max_consec_range`.
    pub consec_run_days: usize,
}

impl MetricSummary {
    pub fn of(t: &EntityTimeline, p: &PolicyParams) -> MetricSummary {
        let ranges = || t.days.iter().map(DayStats::effective_range_minutes);
        MetricSummary {
            daily_hits: Extrema::over(t.days.iter().map(|d| f64::from(d.hits))),
            daily_range_minutes: Extrema::over(ranges()),
            peak_ppm: Extrema::over(t.days.iter().map(|d| f64::from(d.peak_ppm))),
            active_days: t.days.len(),
            ave_hits_per_day: t.ave_hits_per_day(),
            span_ave_hits_per_day: t.span_ave_hits_per_day(),
            ave_range_minutes: if t.days.is_empty() {
                0.0
            } else {
                ranges().sum::<f64>() / t.days.len() as f64
            },
            consec_run_days: consecutive_run(t, p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub key: EntityKey,
    pub blocked: bool,
    pub triggers: TriggerSet,
    pub metrics: MetricSummary,
}

fn exceeds_minutes(d: &DayStats, minutes: u32) -> bool {
    u64::from(d.effective_range_secs) > u64::from(minutes) * 60
}

/// Rate limit that only applies to entities above the daily average.
pub fn eval_smart_throttle(t: &EntityTimeline, p: &PolicyParams) -> bool {
    let peak = t.days.iter().map(|d| d.peak_ppm).max().unwrap_or(0);
    t.ave_hits_per_day() > f64::from(p.max_daily_ave) && peak > p.max_daily_ppm
}

pub fn eval_daily_total(t: &EntityTimeline, p: &PolicyParams) -> bool {
    t.days.iter().any(|d| d.hits > p.max_daily)
}

pub fn eval_daily_range(t: &EntityTimeline, p: &PolicyParams) -> bool {
    t.days.iter().any(|d| exceeds_minutes(d, p.max_daily_range))
}

fn consecutive_run(t: &EntityTimeline, p: &PolicyParams) -> usize {
    t.max_consecutive_run(|d| exceeds_minutes(d, p.max_consec_range))
}

/// A run of adjacent days, each above `max_consec_range`, longer than
/// `max_consec_days`.
pub fn eval_consecutive(t: &EntityTimeline, p: &PolicyParams) -> bool {
    consecutive_run(t, p) > p.max_consec_days as usize
}

/// An entity that asked for robots.txt is tolerated up to `max_robot` hits.
pub fn eval_robots(t: &EntityTimeline, p: &PolicyParams) -> bool {
    t.robots_fetched && t.total_hits() > u64::from(p.max_robot)
}

/// Member-count rules for subnets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubnetGate {
    /// Behavioral policies may block this entity.
    pub eligible: bool,
    /// Blocked for the number of members alone.
    pub count_trigger: bool,
}

pub fn eval_subnet_count(t: &EntityTimeline, p: &PolicyParams) -> SubnetGate {
    let n = t.distinct_ips;
    match t.key.level() {
        Level::Ip => SubnetGate {
            eligible: true,
            count_trigger: false,
        },
        Level::C => SubnetGate {
            eligible: n >= p.min_ip_c,
            count_trigger: n > p.max_ip_c,
        },
        Level::B => SubnetGate {
            eligible: n >= p.min_ip_b,
            count_trigger: false,
        },
        Level::A => SubnetGate {
            eligible: false,
            count_trigger: false,
        },
    }
}

/// Block-or-accept decision for one timeline. /8 entities are never blocked.
pub fn score(t: &EntityTimeline, p: &PolicyParams) -> Verdict {
    let mut triggers = TriggerSet::default();
    let level = t.key.level();
    let gate = eval_subnet_count(t, p);

    if gate.eligible {
        if eval_smart_throttle(t, p) {
            triggers.insert(Trigger::SmartThrottle);
        }
        if eval_daily_total(t, p) {
            triggers.insert(Trigger::DailyTotal);
        }
        if eval_daily_range(t, p) {
            triggers.insert(Trigger::DailyRange);
        }
        if eval_consecutive(t, p) {
            triggers.insert(Trigger::Consecutive);
        }
    }
    if level == Level::Ip && eval_robots(t, p) {
        triggers.insert(Trigger::Robots);
    }
    if gate.count_trigger {
        triggers.insert(Trigger::SubnetCount);
    }

    Verdict {
        key: t.key,
        blocked: !triggers.is_empty(),
        triggers,
        metrics: MetricSummary::of(t, p),
    }
}
