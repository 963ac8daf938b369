//! Angle flags: plain radians or multiples of π such as `pi/8`, `3pi/8`,
//! `-pi/2`, `2*pi`, `0.5pi`.

use std::f64::consts::PI;

pub fn parse_angle(raw: &str) -> Result<f64, String> {
    let s: String = raw.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let lower = s.to_ascii_lowercase().replace('π', "pi");
    let value = match lower.find("pi") {
        None => lower
            .parse::<f64>()
            .map_err(|_| format!("invalid angle `{raw}`"))?,
        Some(at) => {
            let head = lower[..at].trim_end_matches('*');
            let tail = &lower[at + 2..];
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h
                    .parse::<f64>()
                    .map_err(|_| format!("invalid multiple of pi in `{raw}`"))?,
            };
            let divisor = match tail {
                "" => 1.0,
                t => {
                    let d = t
                        .strip_prefix('/')
                        .and_then(|d| d.parse::<f64>().ok())
                        .ok_or_else(|| format!("invalid angle `{raw}`"))?;
                    if d == 0.0 {
                        return Err(format!("division by zero in `{raw}`"));
                    }
                    d
                }
            };
            factor * PI / divisor
        }
    };
    if !value.is_finite() {
        return Err(format!("angle `{raw}` is not finite"));
    }
    Ok(value)
}
