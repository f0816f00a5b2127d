//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logsieve::blocklist::collapse;
use logsieve::cli::{self, ARTIFACTS};
use logsieve::hierarchy::run_hierarchy;
use logsieve::ingest::{self, AccessRecord, FormatSpec, Method, SlotKind, COMBINED_LOG_FORMAT};
use logsieve::policy::{self, PolicyParams, Trigger};
use logsieve::subnet::{EntityKey, Level};
use logsieve::synthgen::{self, Label, LabeledCorpus, Region};
use logsieve::timeline::{build_timelines, EntityTimeline};
use logsieve::workload::{self, Grid, Stage, WorkloadConfig};
use logsieve::{Analysis, RunConfig};

type Outcome = Result<String, String>;

/// Monday 2025-01-13 00:00:00.
const DAY0: i64 = 1_736_726_400;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_ip_timeline(stamps: &[i64]) -> EntityTimeline {
    let records: Vec<AccessRecord> = stamps
        .iter()
        .map(|&t| AccessRecord::new(t, Ipv4Addr::new(198, 51, 100, 7)))
        .collect();
    build_timelines(&records, Level::Ip).into_values().next().expect("one entity")
}

/// Effective range in whole minutes computed straight from the definition.
fn oracle_range_minutes(stamps: &[i64]) -> i64 {
    let mut s = stamps.to_vec();
    s.sort_unstable();
    let gap = s.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    (s[s.len() - 1] - s[0] - gap) / 60
}

fn criterion_1() -> Outcome {
    let p = PolicyParams::default();
    let quiet = [DAY0 + 10 * 60, DAY0 + 6 * 3600, DAY0 + 23 * 3600 + 50 * 60];
    let busy: Vec<i64> = (0..=36).map(|k| DAY0 + 8 * 3600 + k * 20 * 60).collect();
    for (stamps, minutes, fires) in [(&quiet[..], 350, false), (&busy[..], 700, true)] {
        let t = single_ip_timeline(stamps);
        let got = t.days[0].effective_range_minutes();
        ensure(oracle_range_minutes(stamps) == minutes, || "oracle disagrees with the stated case".into())?;
        ensure(got == minutes as f64, || format!("range {got} min, expected {minutes}"))?;
        ensure(policy::eval_daily_range(&t, &p) == fires, || {
            format!("{minutes} min: trigger should be {fires}")
        })?;
    }
    Ok("350 min no trigger, 700 min trigger".into())
}

fn criterion_2() -> Outcome {
    let p = PolicyParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases = 1500;
    let mut case = 0;
    while case < cases {
        let cadence = rng.gen_range(1..=900);
        let total = rng.gen_range(2 * 60..=4 * 3600);
        let midnight = DAY0 + rng.gen_range(0..30) * 86_400;
        let start = midnight - rng.gen_range(1..total);
        let mut t = start;
        let mut stamps = Vec::new();
        while t <= start + total {
            stamps.push(t);
            t += rng.gen_range(1..=cadence);
        }
        if *stamps.last().unwrap() < midnight {
            continue;
        }
        case += 1;
        let tl = single_ip_timeline(&stamps);
        ensure(tl.days.len() == 2, || format!("case {case} spans {} days", tl.days.len()))?;
        if policy::eval_daily_range(&tl, &p) || policy::score(&tl, &p).triggers.contains(Trigger::DailyRange) {
            return Err(format!("case {case}: cadence {cadence}s, {total}s session triggered"));
        }
    }
    Ok(format!("{cases} midnight-crossing sessions, 0 triggers"))
}

fn random_timeline(rng: &mut ChaCha8Rng) -> EntityTimeline {
    let level = *[Level::Ip, Level::C, Level::B].choose(rng).unwrap();
    let members = match level {
        Level::Ip => 1,
        _ => rng.gen_range(1..=120u32),
    };
    let base = u32::from(Ipv4Addr::new(203, 0, 0, 0)) | (rng.gen_range(0..256u32) << 8);
    let days = rng.gen_range(1..=12);
    let intensity = rng.gen_range(1..=160);
    let robots = rng.gen_bool(0.2);
    let mut records = Vec::new();
    for d in 0..days {
        if rng.gen_bool(0.25) {
            continue;
        }
        let start = DAY0 + d * 86_400 + rng.gen_range(0..20 * 3600);
        let span = rng.gen_range(60..=(86_400 - (start - DAY0 - d * 86_400)));
        let hits = rng.gen_range(1..=intensity);
        let burst = rng.gen_bool(0.3);
        for _ in 0..hits {
            let t = if burst { start + rng.gen_range(0..60) } else { start + rng.gen_range(0..span) };
            let host = if level == Level::Ip { 1 } else { rng.gen_range(0..members) };
            let addr = match level {
                Level::B => base | ((host / 200) << 8) | (host % 200),
                _ => base | host,
            };
            let mut r = AccessRecord::new(t, Ipv4Addr::from(addr));
            r.page = Some("/p".into());
            records.push(r);
        }
    }
    if records.is_empty() {
        records.push(AccessRecord::new(DAY0, Ipv4Addr::from(base | 1)));
    }
    if robots {
        records[0].page = Some("/robots.txt".into());
    }
    records.sort_by_key(|r| r.timestamp);
    let mut all = build_timelines(&records, level);
    assert_eq!(all.len(), 1);
    all.pop_first().unwrap().1
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0;
    let mut blocked = 0;
    let mut flips = 0;
    for _ in 0..200 {
        let t = random_timeline(&mut rng);
        for _ in 0..10 {
            // a random baseline so the floors are reachable at every level
            let mut p = PolicyParams::default();
            for key in PolicyParams::KEYS {
                let v = rng.gen_range(1..=2 * p.get(key).unwrap().min(400));
                p = p.with(key, v).unwrap();
            }
            let key = *PolicyParams::KEYS.choose(&mut rng).unwrap();
            let old = p.get(key).unwrap();
            let lowered = p.with(key, rng.gen_range(1..=old)).unwrap();
            let before = policy::score(&t, &p).blocked;
            let after = policy::score(&t, &lowered).blocked;
            checks += 1;
            blocked += usize::from(before);
            flips += usize::from(!before && after);
            if before && !after {
                return Err(format!("lowering {key} from {old} unblocked {}", t.key));
            }
        }
    }
    Ok(format!("{checks} perturbations, 0 violations ({blocked} blocked, {flips} newly blocked)"))
}

fn label_ips(corpus: &LabeledCorpus, records: &[AccessRecord], region: Region) -> BTreeSet<u32> {
    records
        .iter()
        .zip(&corpus.labels)
        .filter(|(_, l)| **l == Label::Bot(region))
        .map(|(r, _)| r.ip_u32())
        .collect()
}

fn parse_corpus(corpus: &LabeledCorpus) -> Result<Vec<AccessRecord>, String> {
    let spec = FormatSpec::compile(COMBINED_LOG_FORMAT).map_err(|e| e.to_string())?;
    let report = ingest::parse_log(&spec, &corpus.lines);
    ensure(report.skipped == 0 && report.records.len() == corpus.labels.len(), || {
        format!("{} lines skipped", report.skipped)
    })?;
    Ok(report.records)
}

fn criterion_4() -> Outcome {
    let corpus = synthgen::generate(&[Region::G, Region::H], 0, 4);
    let records = parse_corpus(&corpus)?;
    let h = run_hierarchy(&records, &PolicyParams::default());

    let g = label_ips(&corpus, &records, Region::G);
    let g_nets: BTreeSet<EntityKey> = g.iter().map(|&a| EntityKey::new(Level::C, a)).collect();
    ensure(g_nets.len() == 2, || format!("expected two /24s in region G, got {}", g_nets.len()))?;
    for &a in &g {
        ensure(!h.ip.is_blocked(&EntityKey::new(Level::Ip, a)), || format!("{} blocked at IP", Ipv4Addr::from(a)))?;
    }
    for k in &g_nets {
        ensure(h.c.is_blocked(k), || format!("{k} not blocked at C"))?;
    }
    let narrow = g_nets
        .iter()
        .find(|k| h.c.timelines[k].distinct_ips == 40)
        .ok_or("no 40-member /24")?;
    let narrow_triggers = h.c.verdicts[narrow].triggers;
    ensure(!narrow_triggers.contains(Trigger::SubnetCount), || "40-member /24 hit the count cap".into())?;

    let hs = label_ips(&corpus, &records, Region::H);
    let h_nets: BTreeSet<EntityKey> = hs.iter().map(|&a| EntityKey::new(Level::B, a)).collect();
    ensure(h_nets.len() == 1, || "region H spans more than one /16".into())?;
    for &a in &hs {
        ensure(!h.ip.is_blocked(&EntityKey::new(Level::Ip, a)), || format!("{} blocked at IP", Ipv4Addr::from(a)))?;
        ensure(!h.c.is_blocked(&EntityKey::new(Level::C, a)), || format!("{} blocked at C", Ipv4Addr::from(a)))?;
    }
    let b = h_nets.first().unwrap();
    ensure(h.b.is_blocked(b), || format!("{b} not blocked at B"))?;
    Ok(format!(
        "G: {} IPs unblocked, {} /24s blocked; H: {} IPs and {} /24s unblocked, {b} blocked",
        g.len(),
        g_nets.len(),
        hs.len(),
        h.c.timelines.keys().filter(|k| k.parent(Level::B) == *b).count()
    ))
}

struct EndToEnd {
    analysis: Analysis,
    elapsed: Duration,
    bot_blocked: f64,
    human_kept: f64,
    j_blocked: usize,
    lines: usize,
}

fn end_to_end() -> Result<EndToEnd, String> {
    let start = Instant::now();
    let corpus = synthgen::generate(&Region::ALL, 50, 2025);
    let records = parse_corpus(&corpus)?;
    let analysis = Analysis::run(records, &PolicyParams::default(), &WorkloadConfig::default());
    let elapsed = start.elapsed();

    let covered = workload::covered_by(&analysis.entries);
    let (mut bots, mut bots_blocked, mut humans, mut humans_kept, mut j_blocked) = (0, 0, 0, 0, 0);
    for (r, l) in analysis.records.iter().zip(&corpus.labels) {
        let hit = covered(r.ip_u32());
        match l {
            Label::Human => {
                humans += 1;
                humans_kept += usize::from(!hit);
            }
            Label::Bot(region) => {
                bots += 1;
                bots_blocked += usize::from(hit);
                if *region == Region::J && hit {
                    j_blocked += 1;
                }
            }
        }
    }
    Ok(EndToEnd {
        bot_blocked: 100.0 * bots_blocked as f64 / bots as f64,
        human_kept: 100.0 * humans_kept as f64 / humans as f64,
        j_blocked,
        lines: corpus.lines.len(),
        analysis,
        elapsed,
    })
}

fn criterion_5(e2e: &Result<EndToEnd, String>) -> Outcome {
    let e = e2e.as_ref().map_err(Clone::clone)?;
    let reduction = e.analysis.table.final_cumulative_pct();
    let summary = format!(
        "{} lines, bots blocked {:.1}%, humans kept {:.1}%, J blocked {}, reduction {:.1}%, {:.1}s",
        e.lines,
        e.bot_blocked,
        e.human_kept,
        e.j_blocked,
        reduction,
        e.elapsed.as_secs_f64()
    );
    ensure(e.bot_blocked >= 90.0, || format!("bot hits blocked below 90%: {summary}"))?;
    ensure(e.human_kept >= 95.0, || format!("human hits kept below 95%: {summary}"))?;
    ensure(e.j_blocked == 0, || format!("region J hits blocked: {summary}"))?;
    ensure((80.0..=95.0).contains(&reduction), || format!("reduction out of range: {summary}"))?;
    ensure(e.elapsed < Duration::from_secs(60), || format!("too slow: {summary}"))?;

    // stage table consistency on the same run
    let t = &e.analysis.table;
    let rows = &t.rows[1..];
    let sum: f64 = rows.iter().map(|r| r.stage_pct).sum();
    ensure((sum - reduction).abs() < 1e-6, || format!("stage sum {sum} != cumulative {reduction}"))?;
    ensure(rows.windows(2).all(|w| w[1].cumulative_pct >= w[0].cumulative_pct), || {
        "cumulative reduction decreases".into()
    })?;
    ensure(t.after(Stage::BSubnet).values == t.final_load.values, || {
        "stage attribution and finalized blocklist disagree".into()
    })?;
    Ok(summary)
}

fn criterion_6(e2e: &Result<EndToEnd, String>) -> Outcome {
    let e = e2e.as_ref().map_err(Clone::clone)?;
    let t = &e.analysis.table;
    let throttle = t.row(Stage::Throttling).cumulative_pct;
    let full = t.final_cumulative_pct();
    let subnets = t.row(Stage::CSubnet).stage_pct + t.row(Stage::BSubnet).stage_pct;
    let summary = format!("throttle only {throttle:.1}%, full {full:.1}%, gap {:.1} pp, subnet stages {subnets:.1} pp", full - throttle);
    ensure(throttle < 50.0, || format!("throttling alone too strong: {summary}"))?;
    ensure(full - throttle >= 30.0, || format!("gap too small: {summary}"))?;
    ensure(subnets >= 30.0, || format!("subnet stages too small: {summary}"))?;
    Ok(summary)
}

/// Direct count of timestamps in each sample window.
fn brute_force_load(stamps: &[i64], ds: i64) -> (i64, Vec<u32>) {
    if stamps.is_empty() {
        return (0, Vec::new());
    }
    let lo = stamps.iter().min().unwrap();
    let hi = stamps.iter().max().unwrap();
    // first minute whose window can hold the earliest request, last minute
    // whose window can hold the latest
    let first = lo.div_euclid(60) + i64::from(lo.rem_euclid(60) != 0);
    let last = (hi + ds - 1).div_euclid(60);
    let mut counts = HashMap::new();
    for &t in stamps {
        for m in first..=last {
            let end = m * 60;
            if t > end - ds && t <= end {
                *counts.entry(m).or_insert(0u32) += 1;
            }
        }
    }
    let series = (first..=last).map(|m| counts.get(&m).copied().unwrap_or(0)).collect();
    (first, series)
}

/// Scatter each timestamp into every sample whose window contains it.
fn scatter_load(stamps: &[i64], ds: i64, first: i64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for &t in stamps {
        let lo = t.div_euclid(60) + i64::from(t.rem_euclid(60) != 0);
        let hi = (t + ds - 1).div_euclid(60);
        for m in lo..=hi {
            out[(m - first) as usize] += 1;
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut corpora: Vec<Vec<i64>> = Vec::new();
    for (regions, humans) in [(&[Region::B][..], 0), (&[Region::C][..], 10), (&[Region::J][..], 20), (&[][..], 40)] {
        let corpus = synthgen::generate(regions, humans, 70);
        corpora.push(parse_corpus(&corpus)?.iter().map(|r| r.timestamp).collect());
    }
    for _ in 0..40 {
        let n = rng.gen_range(0..=10_000);
        let span = rng.gen_range(1..=5 * 86_400);
        let base = DAY0 + rng.gen_range(0..86_400);
        let mut s: Vec<i64> = (0..n).map(|_| base + rng.gen_range(0..span)).collect();
        s.sort_unstable();
        corpora.push(s);
    }

    let mut samples = 0usize;
    for (i, stamps) in corpora.iter().enumerate() {
        ensure(stamps.len() <= 10_000, || format!("corpus {i} exceeds 10k records"))?;
        for ds in [1, 30, 60, 61, 300, 3600] {
            let cfg = WorkloadConfig { ds };
            let got = workload::load_on_grid(stamps, Grid::for_timestamps(stamps, &cfg), &cfg);
            let ds = i64::from(ds);
            let (first, expected) = if stamps.len() <= 1500 && ds <= 300 {
                brute_force_load(stamps, ds)
            } else if stamps.is_empty() {
                (0, Vec::new())
            } else {
                let first = stamps[0].div_euclid(60) + i64::from(stamps[0].rem_euclid(60) != 0);
                let last = (stamps[stamps.len() - 1] + ds - 1).div_euclid(60);
                (first, scatter_load(stamps, ds, first, (last - first + 1) as usize))
            };
            ensure(got.values == expected, || format!("corpus {i}, ds {ds}: series differ"))?;
            if !expected.is_empty() {
                ensure(got.grid.start_minute == first, || format!("corpus {i}, ds {ds}: grid start differs"))?;
            }
            samples += expected.len();
        }
    }
    Ok(format!("{} corpora x 6 window lengths, {samples} samples equal", corpora.len()))
}

fn merged(intervals: impl IntoIterator<Item = (u64, u64)>) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = intervals.into_iter().collect();
    v.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::new();
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut emitted = 0;
    for case in 0..1000 {
        let n = rng.gen_range(0..60);
        let keys: Vec<EntityKey> = (0..n)
            .map(|_| {
                // a small address space so keys overlap often
                let addr = u32::from(Ipv4Addr::new(
                    10,
                    rng.gen_range(0..3),
                    rng.gen_range(0..4),
                    rng.gen_range(0..6),
                ));
                let level = *[Level::Ip, Level::Ip, Level::C, Level::B, Level::A].choose(&mut rng).unwrap();
                EntityKey::new(level, addr)
            })
            .collect();
        let out = collapse(keys.iter().copied());
        emitted += out.len();
        let cidrs: Vec<_> = out.iter().map(|k| k.cidr()).collect();
        for (i, a) in cidrs.iter().enumerate() {
            for (j, b) in cidrs.iter().enumerate() {
                ensure(i == j || !a.contains(b), || format!("case {case}: {a} contains {b}"))?;
            }
        }
        ensure(cidrs.windows(2).all(|w| w[0] < w[1]), || format!("case {case}: output not sorted"))?;
        let span = |c: &logsieve::subnet::Cidr| (u64::from(c.addr()), u64::from(c.last()));
        let want = merged(keys.iter().filter(|k| k.level() != Level::A).map(|k| span(&k.cidr())));
        let got = merged(cidrs.iter().map(span));
        ensure(want == got, || format!("case {case}: coverage changed"))?;
    }
    Ok(format!("1000 cases, {emitted} entries, no nesting, coverage preserved"))
}

fn criterion_9(dir: &Path) -> Outcome {
    let corpus = synthgen::generate(&Region::ALL, 50, 99);
    let log = dir.join("corpus.log");
    fs::write(&log, corpus.log_text()).map_err(|e| e.to_string())?;
    let cfg = RunConfig::parse(&format!("log_format = {COMBINED_LOG_FORMAT}")).map_err(|e| e.to_string())?;
    let outs: Vec<PathBuf> = ["run1", "run2"].iter().map(|n| dir.join(n)).collect();
    for out in &outs {
        cli::cmd_analyze(&cfg, std::slice::from_ref(&log), out, &mut Vec::new()).map_err(|e| e.to_string())?;
    }
    let mut bytes = 0;
    for name in ARTIFACTS.iter().chain([&cli::CLASSIFIED_FILE]) {
        let a = fs::read(outs[0].join(name)).map_err(|e| e.to_string())?;
        let b = fs::read(outs[1].join(name)).map_err(|e| e.to_string())?;
        ensure(!a.is_empty(), || format!("{name} is empty"))?;
        ensure(a == b, || format!("{name} differs between runs"))?;
        bytes += a.len();
    }
    Ok(format!("{} artifacts identical ({bytes} bytes)", ARTIFACTS.len() + 1))
}

fn token_text(rng: &mut ChaCha8Rng, alphabet: &[u8], len: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.gen_range(len);
    (0..n).map(|_| *alphabet.choose(rng).unwrap() as char).collect()
}

fn random_record(rng: &mut ChaCha8Rng, slots: &[SlotKind]) -> AccessRecord {
    let has = |k| slots.contains(&k);
    let mut r = AccessRecord::new(
        rng.gen_range(946_684_800..2_145_916_800),
        Ipv4Addr::from(rng.gen::<u32>()),
    );
    if has(SlotKind::Client) {
        r.client = Some(token_text(rng, b"abcdefghijklmnopqrstuvwxyz0123456789-_", 1..=12));
    }
    if has(SlotKind::Method) {
        r.method = Some(*[Method::Get, Method::Post, Method::Head].choose(rng).unwrap());
    }
    if has(SlotKind::Page) {
        r.page = Some(format!("/{}", token_text(rng, b"abcdefghijklmnopqrstuvwxyz0123456789/._-?=&%", 0..=40)));
    }
    if has(SlotKind::Platform) {
        r.platform = Some(token_text(rng, b"abcdefghijklmnopqrstuvwxyz ABCDEFGHIJ0123456789/.;()_-", 0..=60));
    }
    if has(SlotKind::Return) {
        r.status = Some(rng.gen_range(100..=599));
    }
    if has(SlotKind::Bytes) {
        r.bytes = if rng.gen_bool(0.2) { None } else { Some(rng.gen_range(0..10_000_000)) };
    }
    if has(SlotKind::Number) {
        r.numbers = vec![rng.gen_range(0..1_000_000)];
    }
    r
}

fn criterion_10() -> Outcome {
    let optional = [
        SlotKind::Client,
        SlotKind::Method,
        SlotKind::Page,
        SlotKind::Platform,
        SlotKind::Return,
        SlotKind::Bytes,
        SlotKind::Number,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut templates = 0;
    for date in [SlotKind::DateDmy, SlotKind::DateYmd] {
        for mask in 0u32..(1 << optional.len()) {
            let mut slots = vec![SlotKind::Ip, date, SlotKind::Time];
            slots.extend(optional.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, k)| *k));
            slots.shuffle(&mut rng);
            let mut parts: Vec<String> = slots
                .iter()
                .map(|k| match k {
                    SlotKind::Platform => format!("\"{}\"", k.token()),
                    _ => k.token().to_string(),
                })
                .collect();
            let wildcard_at = rng.gen_range(0..=parts.len());
            parts.insert(wildcard_at, "[*]".into());
            let template = parts.join(" ");
            let spec = FormatSpec::compile(&template).map_err(|e| format!("{template}: {e}"))?;
            templates += 1;
            for _ in 0..1000 {
                let rec = random_record(&mut rng, &slots);
                let fill = token_text(&mut rng, b"abc xyz:+-0123", 0..=8);
                let line = ingest::render_line(&spec, &rec, &[&fill]).ok_or_else(|| format!("{template}: render failed"))?;
                let back = ingest::parse_line(&spec, &line);
                ensure(back.as_ref() == Some(&rec), || format!("{template}: `{line}` parsed as {back:?}"))?;
            }
        }
    }
    Ok(format!("{templates} templates x 1000 records, all identical"))
}

fn main() {
    let started = Instant::now();
    let scratch = tempfile::tempdir().expect("temp dir");
    let mut failures = 0;
    let mut report = |id: u32, name: &str, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let mut outcome = f();
        let elapsed = t.elapsed();
        if let (Ok(msg), Some(b)) = (&outcome, budget) {
            if elapsed > b {
                outcome = Err(format!("{msg}; took {:.2}s, budget {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64()));
            }
        }
        match outcome {
            Ok(msg) => println!("PASS  {id:>2} {name}: {msg} [{:.2}s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("FAIL  {id:>2} {name}: {msg} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    };

    let secs = |s| Some(Duration::from_secs(s));
    report(1, "daily range oracles", secs(1), &mut criterion_1);
    report(2, "midnight rollover", secs(10), &mut criterion_2);
    report(3, "monotonicity", secs(30), &mut criterion_3);
    report(4, "hierarchy detection", None, &mut criterion_4);
    let e2e = end_to_end();
    report(5, "end-to-end synthetic regime", None, &mut || criterion_5(&e2e));
    report(6, "throttling vs full pipeline", None, &mut || criterion_6(&e2e));
    report(7, "workload oracle", None, &mut criterion_7);
    report(8, "blocklist algebra", None, &mut criterion_8);
    report(9, "determinism", None, &mut || criterion_9(scratch.path()));
    report(10, "parser round trip", None, &mut criterion_10);

    println!("acceptance: {} of 10 passed in {:.1}s", 10 - failures, started.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
