//! Octet-aligned IPv4 grouping levels and CIDR blocks.

use std::fmt;
use std::net::Ipv4Addr;

/// Aggregation level of an entity: a single address or a class C/B/A subnet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Ip,
    C,
    B,
    A,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Ip, Level::C, Level::B, Level::A];

    pub fn prefix_len(self) -> u8 {
        match self {
            Level::Ip => 32,
            Level::C => 24,
            Level::B => 16,
            Level::A => 8,
        }
    }

    pub fn netmask(self) -> u32 {
        u32::MAX << (32 - u32::from(self.prefix_len()))
    }

    /// Zero the host bits below this level's prefix.
    pub fn mask(self, addr: u32) -> u32 {
        addr & self.netmask()
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Ip => "ip",
            Level::C => "c",
            Level::B => "b",
            Level::A => "a",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Ip => "IP",
            Level::C => "C",
            Level::B => "B",
            Level::A => "A",
        })
    }
}

/// Identity of an IP or subnet entity. Host bits are always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityKey {
    level: Level,
    value: u32,
}

impl EntityKey {
    pub fn new(level: Level, addr: u32) -> Self {
        EntityKey {
            level,
            value: level.mask(addr),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// The key of the enclosing entity at a coarser (or equal) level.
    pub fn parent(&self, level: Level) -> EntityKey {
        EntityKey::new(level, self.value)
    }

    pub fn cidr(&self) -> Cidr {
        Cidr::new(self.value, self.level.prefix_len())
    }
}

impl fmt::Display for EntityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cidr().fmt(f)
    }
}

/// An IPv4 network block. Ordering is by address, then prefix length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cidr {
    addr: u32,
    prefix: u8,
}

impl Cidr {
    /// Builds a block, zeroing host bits.
    ///
    /// # Panics
    ///
    /// If `prefix > 32`.
    pub fn new(addr: u32, prefix: u8) -> Self {
        assert!(prefix <= 32, "prefix length {prefix} out of range");
        let mask = if prefix == 0 {
            0
        } else {
            u32::MAX << (32 - u32::from(prefix))
        };
        Cidr {
            addr: addr & mask,
            prefix,
        }
    }

    pub fn addr(&self) -> u32 {
        self.addr
    }

    pub fn prefix(&self) -> u8 {
        self.prefix
    }

    /// Last address covered by the block (inclusive).
    pub fn last(&self) -> u32 {
        if self.prefix == 0 {
            u32::MAX
        } else {
            self.addr | !(u32::MAX << (32 - u32::from(self.prefix)))
        }
    }

    pub fn contains_addr(&self, addr: u32) -> bool {
        addr >= self.addr && addr <= self.last()
    }

    pub fn contains(&self, other: &Cidr) -> bool {
        self.prefix <= other.prefix && self.contains_addr(other.addr)
    }

    /// Text form used in blocklists: bare dotted quad for /32, `a.b.c.d/n` otherwise.
    pub fn to_blocklist_string(&self) -> String {
        if self.prefix == 32 {
            Ipv4Addr::from(self.addr).to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Cidr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", Ipv4Addr::from(self.addr), self.prefix)
    }
}
