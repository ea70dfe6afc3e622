//! Parsers for the textual forms accepted on the command line and in
//! config files.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rendezvous_core::{Exact, SharedRandomnessStrategy, StrategyPair};

/// Task matrix written as rows separated by `;`, entries by `,`:
/// `"1,-1;-1,1"`.
pub fn coeff_matrix(s: &str) -> Result<Vec<Vec<i8>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|e| e.trim().parse::<i8>().with_context(|| format!("bad coefficient {e:?}")))
                .collect()
        })
        .collect()
}

/// Comma-separated angles in degrees.
pub fn angles(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|a| {
            let v: f64 = a.trim().parse().with_context(|| format!("bad angle {a:?}"))?;
            if !v.is_finite() {
                bail!("angle {a:?} is not finite");
            }
            Ok(v)
        })
        .collect()
}

/// Four amplitudes for HH, HV, VH, VV, each `re` or `re:im`.
pub fn amplitudes(s: &str) -> Result<[Complex64; 4]> {
    let parts: Vec<Complex64> = s
        .split(',')
        .map(|a| {
            let a = a.trim();
            let (re, im) = a.split_once(':').unwrap_or((a, "0"));
            let re: f64 = re.trim().parse().with_context(|| format!("bad amplitude {a:?}"))?;
            let im: f64 = im.trim().parse().with_context(|| format!("bad amplitude {a:?}"))?;
            Ok(Complex64::new(re, im))
        })
        .collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<Complex64>| anyhow!("expected 4 amplitudes, got {}", v.len()))
}

/// Exact weight from `"p/q"`, an integer, or a finite decimal such as
/// `"0.25"`.
pub fn weight(s: &str) -> Result<Exact> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            bail!("bad decimal weight {s:?}");
        }
        let negative = int.starts_with('-');
        let int: i64 = match int.trim_start_matches('-') {
            "" => 0,
            digits => digits.parse().with_context(|| format!("bad decimal weight {s:?}"))?,
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse()?;
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| anyhow!("weight {s:?} too large"))?;
        return Ok(Exact::new(if negative { -numer } else { numer }, scale));
    }
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().with_context(|| format!("bad weight {s:?}"))?;
    let d: i64 = d.trim().parse().with_context(|| format!("bad weight {s:?}"))?;
    if d == 0 {
        bail!("weight {s:?} has a zero denominator");
    }
    Ok(Exact::new(n, d))
}

/// `"HHV/HHV@1/2;HVH/HVH@1/2"`. A component without `@` gets weight 1, so
/// a single pair needs no weight.
pub fn mixture(s: &str) -> Result<SharedRandomnessStrategy> {
    let components = s
        .split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let (pair, w) = c.split_once('@').unwrap_or((c, "1"));
            let pair: StrategyPair = pair.trim().parse()?;
            Ok((pair, weight(w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SharedRandomnessStrategy::new(components)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coeff() {
        assert_eq!(coeff_matrix("1,-1; -1,1").unwrap(), vec![vec![1, -1], vec![-1, 1]]);
        assert!(coeff_matrix("1,x").is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(weight("1/2").unwrap(), Exact::new(1, 2));
        assert_eq!(weight("3").unwrap(), Exact::new(3, 1));
        assert_eq!(weight("0.25").unwrap(), Exact::new(1, 4));
        assert_eq!(weight(".5").unwrap(), Exact::new(1, 2));
        assert_eq!(weight("-0.5").unwrap(), Exact::new(-1, 2));
        assert!(weight("1/0").is_err());
        assert!(weight("0.").is_err());
        assert!(weight("abc").is_err());
    }

    #[test]
    fn amplitude_forms() {
        let a = amplitudes("0.5, 0:0.5, 0.5, -0.5").unwrap();
        assert_eq!(a[1], Complex64::new(0.0, 0.5));
        assert_eq!(a[3], Complex64::new(-0.5, 0.0));
        assert!(amplitudes("1,0,0").is_err());
    }

    #[test]
    fn mixtures() {
        let m = mixture("HHV/HHV@1/2; HVH/HVH@0.5").unwrap();
        assert_eq!(m.components().len(), 2);
        let err = mixture("HHV/HHV@1/2").unwrap_err();
        assert!(err
            .downcast_ref::<rendezvous_core::Error>()
            .is_some_and(|e| e.is_numerical()));
        assert!(mixture("HHQ/HHV").is_err());
    }
}
