//! Labeled synthetic access logs.
//!
//! Each region reproduces one mechanical access signature from the regions
//! table below; human visitors are generated alongside as background. Every
//! line carries its ground-truth label.
//!
//! | Region | Daily frequency       | Multi-day   | Daily range        | IP usage             |
//! |--------|-----------------------|-------------|--------------------|----------------------|
//! | A      | rapid, repetitive     | consecutive | 24 hr/day          | single               |
//! | B      | infrequent, regular   | consecutive | 24 hr/day          | single               |
//! | C      | scattered, consistent | consecutive | 24 hr/day          | single               |
//! | D      | rapid, repetitive     | single day  | >10 hr/day         | single               |
//! | E      | scattered, frequent   | consecutive | 20-24 hr/day       | single               |
//! | F      | rapid, repetitive     | consecutive | 3 hr/day, shifting | single               |
//! | G      | rapid, repetitive     | consecutive | 24 hr/day          | multiple IPs, narrow |
//! | H      | rapid, repetitive     | consecutive | >18 hr/day         | multiple IPs, wide   |
//! | I      | rapid, repetitive     | consecutive | 8-12 hr/day        | multiple IPs, wide   |
//! | J      | short term            | single day  | <4 hr/day          | full IP range        |
//!
//! Volumes are fixed constants picked so that a full corpus (all regions and
//! 50 humans over 20 days) is about 150k lines. Humans stay inside every
//! default policy threshold: at most two sessions of at most 25 hits a day,
//! 10 to 180 seconds between hits, sessions starting between 07:00 and
//! 21:00, and never more than five active days in a row.

use std::collections::HashSet;
use std::fmt;
use std::net::Ipv4Addr;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{self, AccessRecord, FormatSpec, Method, COMBINED_LOG_FORMAT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
}

impl Region {
    pub const ALL: [Region; 10] = [
        Region::A,
        Region::B,
        Region::C,
        Region::D,
        Region::E,
        Region::F,
        Region::G,
        Region::H,
        Region::I,
        Region::J,
    ];

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn from_letter(s: &str) -> Option<Region> {
        let s = s.trim();
        Region::ALL
            .into_iter()
            .find(|r| s.len() == 1 && s.eq_ignore_ascii_case(&r.letter().to_string()))
    }

    /// Parse a comma-separated list such as `A,G,J`, or `ALL`.
    pub fn parse_list(s: &str) -> Result<Vec<Region>, String> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Region::ALL.to_vec());
        }
        let mut out = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let r = Region::from_letter(part).ok_or_else(|| format!("unknown region `{}`", part.trim()))?;
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn spec(self) -> RegionSpec {
        let (daily_frequency, multi_day, daily_range, ip_usage) = match self {
            Region::A => ("rapid, repetitive", "consecutive", "24 hr/day", "single"),
            Region::B => ("infrequent, regular", "consecutive", "24 hr/day", "single"),
            Region::C => ("scattered, consistent", "consecutive", "24 hr/day", "single"),
            Region::D => ("rapid, repetitive", "single day", ">10 hr/day", "single"),
            Region::E => ("scattered, frequent", "consecutive", "20-24 hr/day", "single"),
            Region::F => ("rapid, repetitive", "consecutive", "3 hr/day, shifting", "single"),
            Region::G => ("rapid, repetitive", "consecutive", "24 hr/day", "multiple IPs, narrow"),
            Region::H => ("rapid, repetitive", "consecutive", ">18 hr/day", "multiple IPs, wide"),
            Region::I => ("rapid, repetitive", "consecutive", "8-12 hr/day", "multiple IPs, wide"),
            Region::J => ("short term", "single day", "<4 hr/day", "full IP range"),
        };
        RegionSpec {
            region: self,
            daily_frequency,
            multi_day,
            daily_range,
            ip_usage,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Qualitative description of one region's access pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionSpec {
    pub region: Region,
    pub daily_frequency: &'static str,
    pub multi_day: &'static str,
    pub daily_range: &'static str,
    pub ip_usage: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Human,
    Bot(Region),
}

impl Label {
    pub fn is_bot(self) -> bool {
        matches!(self, Label::Bot(_))
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "human" => Some(Label::Human),
            _ => Region::from_letter(s.strip_prefix("bot:")?).map(Label::Bot),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Human => f.write_str("human"),
            Label::Bot(r) => write!(f, "bot:{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub lines: Vec<String>,
    pub labels: Vec<Label>,
}

impl LabeledCorpus {
    pub fn log_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    /// `line,label` with 1-based line numbers.
    pub fn labels_csv(&self) -> String {
        let mut out = String::from("line,label\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, l));
        }
        out
    }
}

pub const CORPUS_DAYS: i64 = 20;

/// Corpus options. The default template is [`COMBINED_LOG_FORMAT`].
#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub regions: Vec<Region>,
    pub humans: usize,
    pub seed: u64,
    pub format: Option<FormatSpec>,
}

pub fn generate(regions: &[Region], humans: usize, seed: u64) -> LabeledCorpus {
    generate_with(&SynthOptions {
        regions: regions.to_vec(),
        humans,
        seed,
        format: None,
    })
}

pub fn generate_with(opts: &SynthOptions) -> LabeledCorpus {
    let default_format;
    let (format, fills): (&FormatSpec, &[&str]) = match &opts.format {
        Some(f) => (f, &[]),
        None => {
            default_format = FormatSpec::compile(COMBINED_LOG_FORMAT).expect("built-in format");
            (&default_format, &["-", "+0000", "HTTP/1.1", "\"-\""])
        }
    };

    let mut gen = Generator::new(opts.seed);
    let mut regions = opts.regions.clone();
    regions.sort();
    regions.dedup();
    for r in regions.iter().filter(|r| **r != Region::J) {
        gen.region(*r);
    }
    for h in 0..opts.humans {
        gen.human(h);
    }
    if regions.contains(&Region::J) {
        gen.region_j();
    }

    let mut events = gen.events;
    events.sort_by_key(|e| e.timestamp);
    let number_slots = format
        .slots()
        .iter()
        .filter(|(k, _)| *k == ingest::SlotKind::Number)
        .count();

    let mut lines = Vec::with_capacity(events.len());
    let mut labels = Vec::with_capacity(events.len());
    for e in events {
        let rec = AccessRecord {
            page: Some(e.page),
            method: Some(Method::Get),
            status: Some(e.status),
            bytes: Some(e.bytes),
            client: Some("-".into()),
            platform: Some(e.agent.into()),
            numbers: vec![0; number_slots],
            ..AccessRecord::new(e.timestamp, Ipv4Addr::from(e.ip))
        };
        lines.push(ingest::render_line(format, &rec, fills).expect("every slot is filled"));
        labels.push(e.label);
    }
    LabeledCorpus { lines, labels }
}

/// Midnight at the start of the corpus, 2025-01-06 (a Monday).
pub fn corpus_start() -> i64 {
    NaiveDate::from_ymd_opt(2025, 1, 6)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap()
        .and_utc()
        .timestamp()
}

const HOUR: i64 = 3600;
const DAY: i64 = 86_400;

const BOT_AGENT: &str = "Mozilla/5.0 (compatible; DataHarvester/2.1; +http://crawler.example)";
const HUMAN_AGENTS: [&str; 3] = [
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 Chrome/131.0 Safari/537.36",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 14_2) AppleWebKit/605.1.15 Version/17.2 Safari/605.1.15",
    "Mozilla/5.0 (X11; Linux x86_64; rv:133.0) Gecko/20100101 Firefox/133.0",
];
const HUMAN_PAGES: [&str; 8] = [
    "/",
    "/about.html",
    "/programs.html",
    "/data/index.html",
    "/data/lake-monitoring.html",
    "/data/streams.html",
    "/events.html",
    "/contact.html",
];

struct Event {
    timestamp: i64,
    ip: u32,
    page: String,
    status: u16,
    bytes: u64,
    agent: &'static str,
    label: Label,
}

struct Generator {
    rng: ChaCha8Rng,
    start: i64,
    used_b: HashSet<u32>,
    events: Vec<Event>,
    crawl_counter: u64,
}

impl Generator {
    fn new(seed: u64) -> Generator {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            start: corpus_start(),
            used_b: HashSet::new(),
            events: Vec::new(),
            crawl_counter: 0,
        }
    }

    /// A /16 not used by anything generated so far, outside 0/8, 10/8 and 127/8.
    fn fresh_b(&mut self) -> u32 {
        loop {
            let a: u32 = self.rng.gen_range(1..=223);
            if a == 10 || a == 127 {
                continue;
            }
            let net = (a << 24) | (self.rng.gen_range(0..=255u32) << 16);
            if self.used_b.insert(net) {
                return net;
            }
        }
    }

    fn fresh_ip(&mut self) -> u32 {
        let net = self.fresh_b();
        net | self.rng.gen_range(1..=0xfffeu32)
    }

    fn bot(&mut self, timestamp: i64, ip: u32, region: Region) {
        self.crawl_counter += 1;
        let page = format!("/data/record-{}.html", self.crawl_counter % 5000);
        let status = if self.crawl_counter.is_multiple_of(37) { 404 } else { 200 };
        let bytes = self.rng.gen_range(800..60_000);
        self.events.push(Event {
            timestamp,
            ip,
            page,
            status,
            bytes,
            agent: BOT_AGENT,
            label: Label::Bot(region),
        });
    }

    fn robots(&mut self, timestamp: i64, ip: u32, region: Region) {
        self.events.push(Event {
            timestamp,
            ip,
            page: "/robots.txt".into(),
            status: 200,
            bytes: 120,
            agent: BOT_AGENT,
            label: Label::Bot(region),
        });
    }

    fn day(&self, d: i64) -> i64 {
        self.start + d * DAY
    }

    fn region(&mut self, region: Region) {
        match region {
            Region::A => self.region_a(),
            Region::B => self.region_b(),
            Region::C => self.region_c(),
            Region::D => self.region_d(),
            Region::E => self.region_e(),
            Region::F => self.region_f(),
            Region::G => self.region_g(),
            Region::H => self.region_h(),
            Region::I => self.region_i(),
            Region::J => self.region_j(),
        }
    }

    /// One address, a hit every two minutes around the clock, plus a burst
    /// of 50 hits inside one clock minute every three hours.
    fn region_a(&mut self) {
        let ip = self.fresh_ip();
        for d in 0..CORPUS_DAYS {
            let base = self.day(d);
            for k in 0..720 {
                let jitter = self.rng.gen_range(0..5);
                self.bot(base + k * 120 + jitter, ip, Region::A);
            }
            for b in 0..8 {
                let minute = base + b * 3 * HOUR + 30 * 60;
                for s in 0..50 {
                    self.bot(minute + s, ip, Region::A);
                }
            }
        }
    }

    /// Three addresses polling every 15 minutes around the clock, each
    /// fetching robots.txt once a day: 97 hits a day.
    fn region_b(&mut self) {
        for i in 0..3 {
            let ip = self.fresh_ip();
            let offset = 60 + i * 300;
            for d in 0..CORPUS_DAYS {
                let base = self.day(d) + offset;
                self.robots(base - 30, ip, Region::B);
                for k in 0..96 {
                    self.bot(base + k * 900, ip, Region::B);
                }
            }
        }
    }

    /// Three addresses with 80 uniformly scattered hits a day.
    fn region_c(&mut self) {
        for _ in 0..3 {
            let ip = self.fresh_ip();
            for d in 0..CORPUS_DAYS {
                let base = self.day(d);
                self.robots(base, ip, Region::C);
                for _ in 0..80 {
                    let s = self.rng.gen_range(1..DAY);
                    self.bot(base + s, ip, Region::C);
                }
            }
        }
    }

    /// Two single-day crawls: 11 hours at 10 hits a minute with half-hourly
    /// bursts of 50, and 12 hours at one hit every 8 seconds.
    fn region_d(&mut self) {
        let ip = self.fresh_ip();
        let base = self.day(4) + 8 * HOUR;
        for k in 0..(11 * HOUR / 6) {
            self.bot(base + k * 6, ip, Region::D);
        }
        for b in 0..22 {
            let minute = base + b * 1800 + 600;
            for s in 0..50 {
                self.bot(minute + s, ip, Region::D);
            }
        }

        let ip = self.fresh_ip();
        let base = self.day(13) + 7 * HOUR;
        for k in 0..(12 * HOUR / 8) {
            self.bot(base + k * 8, ip, Region::D);
        }
    }

    /// Two addresses with 300 random hits a day between 01:00 and 23:00.
    fn region_e(&mut self) {
        for _ in 0..2 {
            let ip = self.fresh_ip();
            for d in 0..CORPUS_DAYS {
                let base = self.day(d) + HOUR;
                for _ in 0..300 {
                    let s = self.rng.gen_range(0..22 * HOUR);
                    self.bot(base + s, ip, Region::E);
                }
            }
        }
    }

    /// One address crawling a three hour window that starts an hour later
    /// each day, one hit every 20 seconds.
    fn region_f(&mut self) {
        let ip = self.fresh_ip();
        for d in 0..CORPUS_DAYS {
            let base = self.day(d) + (2 + d % 22) * HOUR;
            for k in 0..(3 * HOUR / 20) {
                self.bot(base + k * 20, ip, Region::F);
            }
        }
    }

    /// Two /24 botnets whose members each take a short daily time slot:
    /// 40 members with 30-minute slots covering 20 hours, and a 96-member
    /// data center with 15-minute slots covering the whole day.
    fn region_g(&mut self) {
        let net = self.fresh_b() | (self.rng.gen_range(0..=255u32) << 8);
        for d in 0..CORPUS_DAYS {
            for host in 0..40u32 {
                let slot = self.day(d) + 2 * HOUR + i64::from(host) * 1800;
                for k in 0..30 {
                    let jitter = self.rng.gen_range(0..20);
                    self.bot(slot + k * 58 + jitter, net | (10 + host), Region::G);
                }
            }
        }

        let net = self.fresh_b() | (self.rng.gen_range(0..=255u32) << 8);
        for d in 0..CORPUS_DAYS {
            for host in 0..96u32 {
                let slot = self.day(d) + i64::from(host) * 900;
                for k in 0..6 {
                    let jitter = self.rng.gen_range(0..30);
                    self.bot(slot + k * 140 + jitter, net | (100 + host), Region::G);
                }
            }
        }
    }

    /// 1280 addresses in one /16, five per /24. Each /24 owns a 260-second
    /// daily slot; the slots together cover 18.5 hours.
    fn region_h(&mut self) {
        let net = self.fresh_b();
        for d in 0..CORPUS_DAYS {
            for c in 0..256u32 {
                let slot = self.day(d) + 3 * HOUR + i64::from(c) * 260;
                for j in 0..5u32 {
                    let jitter = self.rng.gen_range(0..30);
                    let ip = net | (c << 8) | (20 + j * 40);
                    self.bot(slot + i64::from(j) * 40 + jitter, ip, Region::H);
                }
            }
        }
    }

    /// 1024 addresses in one /16, four per /24, each active every other day
    /// inside its /24's 140-second slot; the slots cover ten hours.
    fn region_i(&mut self) {
        let net = self.fresh_b();
        for d in 0..CORPUS_DAYS {
            for c in 0..256u32 {
                let slot = self.day(d) + 8 * HOUR + i64::from(c) * 140;
                for j in 0..4u32 {
                    if (d + i64::from(j)) % 2 != 0 {
                        continue;
                    }
                    let jitter = self.rng.gen_range(0..30);
                    let ip = net | (c << 8) | (7 + j * 50);
                    self.bot(slot + i64::from(j / 2) * 50 + jitter, ip, Region::I);
                }
            }
        }
    }

    /// 1500 unrelated addresses, two hits each, inside three hours of one day.
    fn region_j(&mut self) {
        let mut seen_c = HashSet::new();
        let window = self.day(10) + 14 * HOUR;
        let mut made = 0;
        while made < 1500 {
            let ip: u32 = self.rng.gen_range(0x0100_0000..0xe000_0000);
            let first = ip >> 24;
            if first == 10 || first == 127 || self.used_b.contains(&(ip & 0xffff_0000)) {
                continue;
            }
            if !seen_c.insert(ip & 0xffff_ff00) {
                continue;
            }
            for _ in 0..2 {
                let s = self.rng.gen_range(0..3 * HOUR);
                self.bot(window + s, ip, Region::J);
            }
            made += 1;
        }
    }

    fn human(&mut self, _index: usize) {
        let ip = self.fresh_ip();
        let agent = HUMAN_AGENTS[self.rng.gen_range(0..HUMAN_AGENTS.len())];
        let mut run = 0;
        for d in 0..CORPUS_DAYS {
            if run >= 5 || !self.rng.gen_bool(0.55) {
                run = 0;
                continue;
            }
            run += 1;
            let sessions = if self.rng.gen_bool(0.4) { 2 } else { 1 };
            for _ in 0..sessions {
                let mut t = self.day(d) + self.rng.gen_range(7 * HOUR..21 * HOUR);
                let hits = self.rng.gen_range(5..=25);
                for _ in 0..hits {
                    let page = HUMAN_PAGES[self.rng.gen_range(0..HUMAN_PAGES.len())];
                    let status = if self.rng.gen_bool(0.1) { 304 } else { 200 };
                    let bytes = self.rng.gen_range(300..40_000);
                    self.events.push(Event {
                        timestamp: t,
                        ip,
                        page: page.into(),
                        status,
                        bytes,
                        agent,
                        label: Label::Human,
                    });
                    t += self.rng.gen_range(10..=180);
                }
            }
        }
    }
}
