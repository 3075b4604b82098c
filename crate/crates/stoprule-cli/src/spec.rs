//! Indicator spec strings.
//!
//! Grammar (colon-separated, one spec per `--indicator`):
//!   gl:`<alpha>`            og:`<alpha>`            mne:`<m>`
//!   p:`<alpha>`             p:`<k>`:`<alpha>`         p:`<k>`:`<alpha>`:`<scale>`
//!   pq:`<alpha>`            pq:`<k>`:`<alpha>`
//!   hnr:`<alpha>`           hnr:`<k>`:`<alpha>`
//!   up                    up:`<s>`                up:`<s>`:`<k>`
//!   coi:`<alpha>`           coi:`<k>`:`<alpha>`
//!   `<family>`:tuned
//!
//! Short forms take `k` from `--strip-k`. COI takes its coefficient from
//! `--coef` and its pool from `--pool` (a comma-separated list of specs;
//! coi, oracle and tuned markers cannot be pooled).

use stoprule_core::{default_pool, Coefficient, CoiConfig, IndicatorConfig, IndicatorKind};

use crate::error::{CliError, Result};

/// Parsing context carrying the defaults shared by all specs.
#[derive(Debug, Clone)]
pub struct SpecContext {
    pub strip_k: usize,
    pub coefficient: Coefficient,
    pub pool: Vec<IndicatorConfig>,
}

impl Default for SpecContext {
    fn default() -> Self {
        Self {
            strip_k: 5,
            coefficient: Coefficient::Pearson,
            pool: default_pool(),
        }
    }
}

/// A parsed `--indicator` entry: either a fixed configuration or a marker
/// asking for the family to be tuned per curve.
#[derive(Debug, Clone, PartialEq)]
pub enum IndicatorSpec {
    Fixed(IndicatorConfig),
    Tuned(IndicatorKind),
}

pub fn parse_kind(s: &str) -> Result<IndicatorKind> {
    IndicatorKind::ALL
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| CliError::input(format!("unknown indicator family {s:?}")))
}

fn num<T: std::str::FromStr>(spec: &str, part: &str, what: &str) -> Result<T> {
    part.parse()
        .map_err(|_| CliError::input(format!("{spec:?}: {what} {part:?} is not a number")))
}

fn arity(spec: &str, expected: &str) -> CliError {
    CliError::input(format!("{spec:?}: expected {expected}"))
}

pub fn parse_indicator(spec: &str, ctx: &SpecContext) -> Result<IndicatorSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let family = parts[0].to_ascii_lowercase();

    if parts.len() == 2 && parts[1].eq_ignore_ascii_case("tuned") {
        if family == "oracle" {
            return Err(CliError::input("the oracle baseline has nothing to tune"));
        }
        return Ok(IndicatorSpec::Tuned(parse_kind(&family)?));
    }

    let config =
        match (family.as_str(), parts.len()) {
            ("gl", 2) => IndicatorConfig::Gl {
                alpha: num(spec, parts[1], "threshold")?,
            },
            ("og", 2) => IndicatorConfig::Og {
                alpha: num(spec, parts[1], "threshold")?,
            },
            ("mne", 2) => IndicatorConfig::Mne {
                m: num(spec, parts[1], "epoch count")?,
            },
            ("p", 2) => IndicatorConfig::p(ctx.strip_k, num(spec, parts[1], "threshold")?),
            ("p", 3) => IndicatorConfig::p(
                num(spec, parts[1], "strip length")?,
                num(spec, parts[2], "threshold")?,
            ),
            ("p", 4) => IndicatorConfig::P {
                k: num(spec, parts[1], "strip length")?,
                alpha: num(spec, parts[2], "threshold")?,
                scale: num(spec, parts[3], "scale")?,
            },
            ("pq", 2) => IndicatorConfig::Pq {
                k: ctx.strip_k,
                alpha: num(spec, parts[1], "threshold")?,
            },
            ("pq", 3) => IndicatorConfig::Pq {
                k: num(spec, parts[1], "strip length")?,
                alpha: num(spec, parts[2], "threshold")?,
            },
            ("hnr", 2) => IndicatorConfig::Hnr {
                k: ctx.strip_k,
                alpha: num(spec, parts[1], "threshold")?,
            },
            ("hnr", 3) => IndicatorConfig::Hnr {
                k: num(spec, parts[1], "strip length")?,
                alpha: num(spec, parts[2], "threshold")?,
            },
            ("up", 1) => IndicatorConfig::Up {
                s: 5,
                k: ctx.strip_k,
            },
            ("up", 2) => IndicatorConfig::Up {
                s: num(spec, parts[1], "strip count")?,
                k: ctx.strip_k,
            },
            ("up", 3) => IndicatorConfig::Up {
                s: num(spec, parts[1], "strip count")?,
                k: num(spec, parts[2], "strip length")?,
            },
            ("coi", 2) => IndicatorConfig::Coi(CoiConfig {
                k: ctx.strip_k,
                alpha_corr: num(spec, parts[1], "correlation threshold")?,
                coefficient: ctx.coefficient,
                pool: ctx.pool.clone(),
            }),
            ("coi", 3) => IndicatorConfig::Coi(CoiConfig {
                k: num(spec, parts[1], "strip length")?,
                alpha_corr: num(spec, parts[2], "correlation threshold")?,
                coefficient: ctx.coefficient,
                pool: ctx.pool.clone(),
            }),
            ("oracle", _) => return Err(CliError::input(
                "the oracle baseline is always evaluated; it cannot be requested as an indicator",
            )),
            ("gl" | "og" | "mne", _) => return Err(arity(spec, "one parameter")),
            ("p", _) => {
                return Err(arity(
                    spec,
                    "p:<alpha>, p:<k>:<alpha> or p:<k>:<alpha>:<scale>",
                ))
            }
            ("pq" | "hnr" | "coi", _) => {
                return Err(arity(spec, "<family>:<alpha> or <family>:<k>:<alpha>"))
            }
            ("up", _) => return Err(arity(spec, "up, up:<s> or up:<s>:<k>")),
            _ => {
                return Err(CliError::input(format!(
                    "unknown indicator family {:?}",
                    parts[0]
                )))
            }
        };
    config
        .validate()
        .map_err(|e| CliError::input(format!("{spec:?}: {e}")))?;
    Ok(IndicatorSpec::Fixed(config))
}

/// Parse a comma-separated pool. Pool members are plain indicators; coi,
/// oracle and tuned markers are rejected.
pub fn parse_pool(s: &str, strip_k: usize) -> Result<Vec<IndicatorConfig>> {
    let ctx = SpecContext {
        strip_k,
        coefficient: Coefficient::Pearson,
        pool: Vec::new(),
    };
    let mut pool = Vec::new();
    for entry in s.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        match parse_indicator(entry, &ctx)? {
            IndicatorSpec::Fixed(IndicatorConfig::Coi(_)) => {
                return Err(CliError::input("coi cannot be a member of its own pool"))
            }
            IndicatorSpec::Fixed(config) => pool.push(config),
            IndicatorSpec::Tuned(_) => {
                return Err(CliError::input("tuned markers cannot appear in a pool"))
            }
        }
    }
    if pool.is_empty() {
        return Err(CliError::input("pool spec is empty"));
    }
    Ok(pool)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(s: &str) -> IndicatorConfig {
        match parse_indicator(s, &SpecContext::default()).unwrap() {
            IndicatorSpec::Fixed(c) => c,
            other => panic!("expected fixed config, got {other:?}"),
        }
    }

    #[test]
    fn parses_default_pool_string() {
        // The documented example pool round-trips to the default pool.
        let pool = parse_pool("gl:1.0,p:5:1.0,pq:5:1.0,up:5:5,hnr:5:5.0,og:0.5", 5).unwrap();
        assert_eq!(pool, default_pool());
    }

    #[test]
    fn short_forms_take_strip_k() {
        let ctx = SpecContext {
            strip_k: 7,
            ..SpecContext::default()
        };
        assert_eq!(
            parse_indicator("p:1.5", &ctx).unwrap(),
            IndicatorSpec::Fixed(IndicatorConfig::p(7, 1.5))
        );
        match parse_indicator("coi:0.7", &ctx).unwrap() {
            IndicatorSpec::Fixed(IndicatorConfig::Coi(cfg)) => {
                assert_eq!(cfg.k, 7);
                assert_eq!(cfg.alpha_corr, 0.7);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "gl:1.0",
            "p:5:1.5",
            "p:5:1.0:1000.0",
            "pq:5:1.0",
            "up:5:5",
            "hnr:5:5.0",
            "og:0.5",
            "mne:10",
            "coi:5:0.7",
        ] {
            assert_eq!(fixed(s).to_string(), s, "round trip of {s}");
        }
    }

    #[test]
    fn tuned_markers() {
        assert_eq!(
            parse_indicator("gl:tuned", &SpecContext::default()).unwrap(),
            IndicatorSpec::Tuned(IndicatorKind::Gl)
        );
        assert!(parse_indicator("oracle:tuned", &SpecContext::default()).is_err());
    }

    #[test]
    fn rejections() {
        let ctx = SpecContext::default();
        assert!(parse_indicator("oracle", &ctx).is_err());
        assert!(parse_indicator("gl", &ctx).is_err());
        assert!(parse_indicator("gl:x", &ctx).is_err());
        assert!(parse_indicator("wat:1", &ctx).is_err());
        assert!(parse_indicator("p:1:2:3:4", &ctx).is_err());
        assert!(parse_indicator("coi:5:1.5", &ctx).is_err()); // threshold > 1
        assert!(parse_pool("coi:5:0.5,gl:1.0", 5).is_err());
        assert!(parse_pool("", 5).is_err());
        assert!(parse_pool("gl:tuned", 5).is_err());
    }
}
