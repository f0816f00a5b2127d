use crate::error::ConfigError;

/// Thresholds for the blocking policies. Lower values block more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolicyParams {
    /// Minimum member addresses for a /16 to be scored.
    pub min_ip_b: u32,
    /// Minimum member addresses for a /24 to be scored.
    pub min_ip_c: u32,
    /// A /24 with more member addresses than this is blocked outright.
    pub max_ip_c: u32,
    /// Total hits tolerated from an address that fetched robots.txt.
    pub max_robot: u32,
    /// Hits per day.
    pub max_daily: u32,
    /// Effective daily range, minutes.
    pub max_daily_range: u32,
    /// Length of a run of busy days.
    pub max_consec_days: u32,
    /// Effective daily range, minutes, for a day to count towards a run.
    pub max_consec_range: u32,
    /// Average hits per active day before rate limiting applies.
    pub max_daily_ave: u32,
    /// Hits inside one clock minute.
    pub max_daily_ppm: u32,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams {
            min_ip_b: 1024,
            min_ip_c: 3,
            max_ip_c: 80,
            max_robot: 10,
            max_daily: 100,
            max_daily_range: 360,
            max_consec_days: 5,
            max_consec_range: 240,
            max_daily_ave: 40,
            max_daily_ppm: 40,
        }
    }
}

impl PolicyParams {
    /// Configuration key names, in table order.
    pub const KEYS: [&'static str; 10] = [
        "min_ip_b",
        "min_ip_c",
        "max_ip_c",
        "max_robot",
        "max_daily",
        "max_daily_range",
        "max_consec_days",
        "max_consec_range",
        "max_daily_ave",
        "max_daily_ppm",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut u32> {
        Some(match key {
            "min_ip_b" => &mut self.min_ip_b,
            "min_ip_c" => &mut self.min_ip_c,
            "max_ip_c" => &mut self.max_ip_c,
            "max_robot" => &mut self.max_robot,
            "max_daily" => &mut self.max_daily,
            "max_daily_range" => &mut self.max_daily_range,
            "max_consec_days" => &mut self.max_consec_days,
            "max_consec_range" => &mut self.max_consec_range,
            "max_daily_ave" => &mut self.max_daily_ave,
            "max_daily_ppm" => &mut self.max_daily_ppm,
            _ => return None,
        })
    }

    pub fn get(&self, key: &str) -> Option<u32> {
        self.clone().slot(key).map(|v| *v)
    }

    /// Set a parameter by key. Returns `Ok(false)` for keys that are not
    /// policy parameters.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool, ConfigError> {
        let Some(slot) = self.slot(key) else {
            return Ok(false);
        };
        let parsed: u32 = value.trim().parse().map_err(|_| ConfigError::InvalidValue {
            key: key.to_owned(),
            reason: format!("`{value}` is not a non-negative integer"),
        })?;
        if parsed == 0 {
            return Err(ConfigError::InvalidValue {
                key: key.to_owned(),
                reason: "must be greater than zero".into(),
            });
        }
        *slot = parsed;
        Ok(true)
    }

    /// Copy with one parameter replaced; `None` if `key` is unknown.
    pub fn with(&self, key: &str, value: u32) -> Option<PolicyParams> {
        let mut p = *self;
        *p.slot(key)? = value;
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_table() {
        let p = PolicyParams::default();
        let values: Vec<u32> = PolicyParams::KEYS.iter().map(|k| p.get(k).unwrap()).collect();
        assert_eq!(values, [1024, 3, 80, 10, 100, 360, 5, 240, 40, 40]);
    }

    #[test]
    fn set_validates() {
        let mut p = PolicyParams::default();
        assert_eq!(p.set("max_daily", " 250 "), Ok(true));
        assert_eq!(p.max_daily, 250);
        assert_eq!(p.set("log_format", "x"), Ok(false));
        assert!(p.set("max_daily", "0").is_err());
        assert!(p.set("max_daily", "-3").is_err());
        assert!(p.set("max_daily", "ten").is_err());
    }
}
