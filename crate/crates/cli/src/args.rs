//! Flag parsing.
//!
//! `--flag value` and `--flag` (boolean) forms only; anything unknown is a
//! usage error. Values are pulled out by the commands, which then call
//! [`Args::finish`] to reject leftovers.

use std::collections::BTreeMap;

#[derive(Debug)]
pub struct Args {
    flags: BTreeMap<String, String>,
    order: Vec<String>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const BOOLEAN_FLAGS: [&str; 2] = ["constrain-nu", "no-plots"];

impl Args {
    pub fn parse<I: Iterator<Item = String>>(mut raw: I) -> Result<Args, UsageError> {
        let mut flags = BTreeMap::new();
        let mut order = Vec::new();
        while let Some(token) = raw.next() {
            let name = token
                .strip_prefix("--")
                .ok_or_else(|| UsageError(format!("unexpected argument '{token}'")))?
                .to_string();
            if name.is_empty() {
                return Err(UsageError("empty flag name".to_string()));
            }
            let value = if BOOLEAN_FLAGS.contains(&name.as_str()) {
                "true".to_string()
            } else {
                raw.next()
                    .ok_or_else(|| UsageError(format!("flag --{name} needs a value")))?
            };
            if flags.insert(name.clone(), value).is_some() {
                return Err(UsageError(format!("flag --{name} given twice")));
            }
            order.push(name);
        }
        Ok(Args { flags, order })
    }

    pub fn take(&mut self, name: &str) -> Option<String> {
        self.order.retain(|n| n != name);
        self.flags.remove(name)
    }

    pub fn take_or(&mut self, name: &str, default: &str) -> String {
        self.take(name).unwrap_or_else(|| default.to_string())
    }

    pub fn require(&mut self, name: &str) -> Result<String, UsageError> {
        self.take(name)
            .ok_or_else(|| UsageError(format!("missing required flag --{name}")))
    }

    pub fn take_parse<T: std::str::FromStr>(
        &mut self,
        name: &str,
    ) -> Result<Option<T>, UsageError> {
        match self.take(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| UsageError(format!("cannot parse --{name} value '{raw}'"))),
        }
    }

    pub fn take_bool(&mut self, name: &str) -> bool {
        self.take(name).is_some()
    }

    /// Errors if any flag was left unconsumed.
    pub fn finish(self) -> Result<(), UsageError> {
        if let Some(name) = self.order.first() {
            return Err(UsageError(format!("unknown flag --{name}")));
        }
        Ok(())
    }
}

/// Parses "a,b,c" into numbers.
pub fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, UsageError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| UsageError(format!("cannot parse {what} entry '{s}'")))
        })
        .collect()
}

/// Parses "start:stop:step" into an inclusive grid.
pub fn parse_grid(raw: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(UsageError(format!(
            "grid '{raw}' must look like start:stop:step"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| UsageError(format!("bad grid start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| UsageError(format!("bad grid stop '{}'", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| UsageError(format!("bad grid step '{}'", parts[2])))?;
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(UsageError(format!("grid '{raw}' is not increasing")));
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + k as f64 * step;
        if v > stop + 1e-9 {
            break;
        }
        // Snap to a tidy decimal so 0.30000000000000004 becomes 0.3.
        out.push((v * 1e9).round() / 1e9);
        k += 1;
    }
    Ok(out)
}
