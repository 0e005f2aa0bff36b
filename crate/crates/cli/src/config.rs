//! `key = value` overrides for the automatic solver choice.

use anyhow::{bail, Context, Result};
use rbr_core::AutoConfig;

/// Applies every `key = value` line of `text` to `base`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_auto_config(text: &str, mut base: AutoConfig) -> Result<AutoConfig> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {line_no}: expected `key = value`");
        };
        let value: usize = value
            .trim()
            .parse()
            .with_context(|| format!("line {line_no}: `{}` is not a non-negative integer", value.trim()))?;
        match key.trim() {
            "bruteforce_max_n" => base.bruteforce_max_n = value,
            "dc_max_modulator" => base.dc_max_modulator = value,
            "mw_max_width" => base.mw_max_width = value,
            other => bail!("line {line_no}: unknown key `{other}`"),
        }
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_listed_keys_only() {
        let cfg = parse_auto_config("# thresholds\nbruteforce_max_n = 4\n\nmw_max_width=9\n", AutoConfig::default()).unwrap();
        assert_eq!(cfg.bruteforce_max_n, 4);
        assert_eq!(cfg.mw_max_width, 9);
        assert_eq!(cfg.dc_max_modulator, AutoConfig::default().dc_max_modulator);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_auto_config("colour = red", AutoConfig::default()).is_err());
        assert!(parse_auto_config("mw_max_width = -1", AutoConfig::default()).is_err());
        assert!(parse_auto_config("mw_max_width", AutoConfig::default()).is_err());
    }
}
