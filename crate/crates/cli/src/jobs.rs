//! Expansion of the command-line selection into a sorted list of triples.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use pcn_core::arith::primes_below;
use pcn_core::PrimePowerPair;

/// A triple `(p, e, n)` describing `F_{p^{en}} / F_{p^e}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub p: u64,
    pub e: u32,
    pub n: u64,
}

impl Triple {
    pub fn pair(&self) -> Result<PrimePowerPair> {
        PrimePowerPair::new(self.p, self.e, self.n).with_context(|| format!("invalid triple {self}"))
    }

    /// Output order: by `n`, then `p`, then `e`.
    pub fn sort_key(&self) -> (u64, u64, u32) {
        (self.n, self.p, self.e)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.e, self.n)
    }
}

impl FromStr for Triple {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [p, e, n] = parts.as_slice() else {
            bail!("expected p,e,n but got {s:?}");
        };
        let t = Triple {
            p: p.parse().with_context(|| format!("bad p in {s:?}"))?,
            e: e.parse().with_context(|| format!("bad e in {s:?}"))?,
            n: n.parse().with_context(|| format!("bad n in {s:?}"))?,
        };
        t.pair()?;
        Ok(t)
    }
}

/// Parses `A..B`, `A..=B`, `A-B` (all inclusive) or a single `N`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let s = s.trim();
    let num = |x: &str| x.trim().parse::<u64>().with_context(|| format!("bad number {x:?} in range {s:?}"));
    let range = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once('-') {
        num(a)?..=num(b)?
    } else {
        let n = num(s)?;
        n..=n
    };
    if range.is_empty() || *range.start() == 0 {
        bail!("range {s:?} must be non-empty and start at 1 or above");
    }
    Ok(range)
}

/// Reads one `p,e,n` triple per line; blank lines and `#` comments are skipped.
pub fn read_triples(path: &Path) -> Result<Vec<Triple>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| l.parse().with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

/// Triples for every `n` in the range, every prime `p <= p_max` and every
/// `e >= 1` with `p^e <= q_max`.
pub fn expand_range(n_range: RangeInclusive<u64>, p_max: u64, q_max: u64) -> Vec<Triple> {
    let mut out = Vec::new();
    for n in n_range {
        for p in primes_below(p_max.saturating_add(1)) {
            let mut e = 1u32;
            while p.checked_pow(e).is_some_and(|q| q <= q_max) {
                out.push(Triple { p, e, n });
                e += 1;
            }
        }
    }
    out
}

/// Merges explicit and range triples, sorted and without duplicates.
pub fn collect_triples(
    explicit: &[Triple],
    file: Option<&Path>,
    n_range: Option<&str>,
    p_max: Option<u64>,
    q_max: Option<u64>,
) -> Result<Vec<Triple>> {
    let mut all = explicit.to_vec();
    if let Some(path) = file {
        all.extend(read_triples(path)?);
    }
    if let Some(r) = n_range {
        let p_max = p_max.ok_or_else(|| anyhow!("--n-range needs --p-max"))?;
        all.extend(expand_range(parse_range(r)?, p_max, q_max.unwrap_or(p_max)));
    } else if p_max.is_some() || q_max.is_some() {
        bail!("--p-max and --q-max only apply together with --n-range");
    }
    if all.is_empty() {
        bail!("no triples selected; use --triple, --triples or --n-range");
    }
    all.sort_by_key(Triple::sort_key);
    all.dedup();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_range("3-4").unwrap(), 3..=4);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("0..2").is_err());
    }

    #[test]
    fn triples() {
        let t: Triple = " 2, 2 ,10".parse().unwrap();
        assert_eq!(t, Triple { p: 2, e: 2, n: 10 });
        assert!("4,1,3".parse::<Triple>().is_err());
        assert!("2,1".parse::<Triple>().is_err());
    }

    #[test]
    fn expansion_is_sorted() {
        let ts = collect_triples(&[Triple { p: 3, e: 1, n: 2 }], None, Some("2..3"), Some(4), Some(4)).unwrap();
        let shown: Vec<String> = ts.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["2,1,2", "2,2,2", "3,1,2", "2,1,3", "2,2,3", "3,1,3"]);
    }
}
