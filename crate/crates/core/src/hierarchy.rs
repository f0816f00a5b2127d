//! Scoring the same records at every aggregation level.

use std::collections::BTreeMap;

use crate::ingest::AccessRecord;
use crate::policy::{self, PolicyParams, Verdict};
use crate::subnet::{EntityKey, Level};
use crate::timeline::{self, EntityTimeline};

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub level: Level,
    pub timelines: BTreeMap<EntityKey, EntityTimeline>,
    /// Empty at level A.
    pub verdicts: BTreeMap<EntityKey, Verdict>,
}

impl LevelResult {
    pub fn build(records: &[AccessRecord], level: Level, params: &PolicyParams) -> LevelResult {
        let timelines = timeline::build_timelines(records, level);
        let verdicts = if level == Level::A {
            BTreeMap::new()
        } else {
            timelines
                .iter()
                .map(|(k, t)| (*k, policy::score(t, params)))
                .collect()
        };
        LevelResult {
            level,
            timelines,
            verdicts,
        }
    }

    pub fn blocked(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.values().filter(|v| v.blocked)
    }

    pub fn is_blocked(&self, key: &EntityKey) -> bool {
        self.verdicts.get(key).is_some_and(|v| v.blocked)
    }
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub ip: LevelResult,
    pub c: LevelResult,
    pub b: LevelResult,
    pub a: LevelResult,
}

impl Hierarchy {
    pub fn level(&self, level: Level) -> &LevelResult {
        match level {
            Level::Ip => &self.ip,
            Level::C => &self.c,
            Level::B => &self.b,
            Level::A => &self.a,
        }
    }
}

/// Build and score all four levels from the full record set.
pub fn run_hierarchy(records: &[AccessRecord], params: &PolicyParams) -> Hierarchy {
    std::thread::scope(|s| {
        let build = |level| s.spawn(move || LevelResult::build(records, level, params));
        let ip = build(Level::Ip);
        let c = build(Level::C);
        let b = build(Level::B);
        let a = build(Level::A);
        Hierarchy {
            ip: ip.join().expect("level build panicked"),
            c: c.join().expect("level build panicked"),
            b: b.join().expect("level build panicked"),
            a: a.join().expect("level build panicked"),
        }
    })
}
