//! Session configuration: `key = value` files merged with command-line flags.

use std::fmt;
use std::path::Path;

use drinfeld_core::field::{is_prime, parse_field_spec};
use drinfeld_core::{BaseRing, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (json, csv or text)")),
        }
    }
}

/// q = p^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u32,
    pub e: usize,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        (self.p as u64).pow(self.e as u32)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Accepts `9`, `3^2`.
pub fn parse_prime_power(s: &str) -> Result<PrimePower, String> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let p: u32 = b.trim().parse().map_err(|_| format!("bad base in `{s}`"))?;
        let e: usize = e.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        if !is_prime(p) || e == 0 {
            return Err(format!("`{s}` is not a prime power"));
        }
        return Ok(PrimePower { p, e });
    }
    let n: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    for p in 2..=n.min(251) as u32 {
        if !n.is_multiple_of(p as u64) {
            continue;
        }
        if !is_prime(p) {
            return Err(format!("{n} is not a prime power"));
        }
        let mut e = 0;
        let mut m = n;
        while m.is_multiple_of(p as u64) {
            m /= p as u64;
            e += 1;
        }
        return if m == 1 {
            Ok(PrimePower { p, e })
        } else {
            Err(format!("{n} is not a prime power"))
        };
    }
    Err(format!("{n} is not a prime power below 256"))
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub q: PrimePower,
    /// Explicit coefficient field over F_p, only for prime q.
    pub field: Option<String>,
    /// [K : F_q] when no explicit field is given.
    pub degree: usize,
    /// Cap on [L : K] for splitting fields.
    pub max_ext_degree: usize,
    /// Cap on enumerated candidates (points, field elements).
    pub max_candidates: u64,
    pub format: Format,
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            q: PrimePower { p: 2, e: 1 },
            field: None,
            degree: 1,
            max_ext_degree: 256,
            max_candidates: 1 << 16,
            format: Format::Json,
            seed: 0,
        }
    }
}

impl SessionConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg = SessionConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), i + 1))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let int = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| format!("`{v}` is not a nonnegative integer"))
        };
        match key {
            "q" => self.q = parse_prime_power(value)?,
            "field" => self.field = Some(value.to_string()),
            "degree" => self.degree = int(value)? as usize,
            "max_ext_degree" => self.max_ext_degree = int(value)? as usize,
            "max_candidates" => self.max_candidates = int(value)?,
            "format" => self.format = value.parse()?,
            "seed" => self.seed = int(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.degree == 0 || self.max_ext_degree == 0 || self.max_candidates == 0 {
            return Err("degree and budgets must be positive".into());
        }
        if self.field.is_some() && self.q.e != 1 {
            return Err("an explicit field needs prime q; use degree for q = p^e".into());
        }
        Ok(())
    }

    pub fn base_ring(&self) -> Result<BaseRing, String> {
        BaseRing::over(self.q.p, self.q.e).map_err(|e| e.to_string())
    }

    /// The coefficient field K.
    pub fn field(&self) -> Result<FiniteField, String> {
        if let Some(spec) = &self.field {
            let f = parse_field_spec(spec).map_err(|e| format!("field: {e}"))?;
            if f.p() != self.q.p {
                return Err(format!("field characteristic {} does not match q = {}", f.p(), self.q));
            }
            return Ok(f);
        }
        let fq = FiniteField::base(self.q.p, self.q.e).map_err(|e| e.to_string())?;
        fq.extension(self.degree).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(parse_prime_power("4").unwrap(), PrimePower { p: 2, e: 2 });
        assert_eq!(parse_prime_power("3^2").unwrap(), PrimePower { p: 3, e: 2 });
        assert_eq!(parse_prime_power("7").unwrap(), PrimePower { p: 7, e: 1 });
        assert!(parse_prime_power("6").is_err());
        assert!(parse_prime_power("1").is_err());
        assert!(parse_prime_power("4^2").is_err());
    }

    #[test]
    fn keys_and_validation() {
        let mut c = SessionConfig::default();
        c.set("q", "4").unwrap();
        c.set("format", "text").unwrap();
        assert!(c.set("colour", "red").is_err());
        c.set("field", "p=2 deg=2").unwrap();
        assert!(c.validate().is_err());
        c.field = None;
        c.set("max_candidates", "0").unwrap();
        assert!(c.validate().is_err());
    }
}
