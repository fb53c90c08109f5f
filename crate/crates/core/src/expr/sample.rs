//! Seeded random sampling and probabilistic zero testing.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Assignment, EvalError, Expr, Symbol, SymbolKind};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub points: usize,
    /// Relative tolerance for zero tests.
    pub tol: f64,
    pub base_range: f64,
    pub jet_range: f64,
    /// Symbols in denominators are drawn from `±[lo, hi]`.
    pub denom_range: (f64, f64),
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: DEFAULT_SEED,
            points: 32,
            tol: 1e-7,
            base_range: 0.4,
            jet_range: 1.0,
            denom_range: (0.5, 1.5),
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig { seed, ..Self::default() }
    }

    /// Default configuration with the seed taken from `LIEINV_SEED` if set.
    pub fn from_env() -> Self {
        let seed = std::env::var("LIEINV_SEED").ok().and_then(|s| parse_seed(&s)).unwrap_or(DEFAULT_SEED);
        Self::with_seed(seed)
    }

    /// A sampler whose stream depends on the seed and a caller-chosen salt,
    /// so independent checks do not share points.
    pub fn sampler(&self, salt: u64) -> Sampler {
        Sampler { cfg: *self, rng: ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)) }
    }
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroTestError {
    #[error("every sampled point was singular (last failure: {0})")]
    Unsampleable(EvalError),
}

pub struct Sampler {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Draws one point.  Symbols are visited in sorted order so the stream is
    /// reproducible.
    pub fn point(&mut self, symbols: &BTreeSet<Symbol>, denominators: &BTreeSet<Symbol>) -> Assignment {
        let mut a = Assignment::with_capacity(symbols.len());
        for s in symbols {
            let v = if denominators.contains(s) {
                let (lo, hi) = self.cfg.denom_range;
                let mag = self.rng.gen_range(lo..hi);
                if self.rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            } else {
                let r = match s.kind() {
                    SymbolKind::Base => self.cfg.base_range,
                    SymbolKind::Param | SymbolKind::Jet { .. } => self.cfg.jet_range,
                };
                self.rng.gen_range(-r..r)
            };
            a.insert(s.clone(), v);
        }
        a
    }

    /// Up to `count` non-singular points for all of `exprs`, trying at most
    /// eight times as many candidates.
    pub fn regular_points(&mut self, exprs: &[&Expr], count: usize) -> Result<Vec<Assignment>, ZeroTestError> {
        let mut symbols = BTreeSet::new();
        let mut denoms = BTreeSet::new();
        for e in exprs {
            symbols.extend(e.symbols());
            denoms.extend(e.denominator_symbols());
        }
        let mut out = Vec::with_capacity(count);
        let mut last = None;
        for _ in 0..count.max(1) * 8 {
            if out.len() == count {
                break;
            }
            let p = self.point(&symbols, &denoms);
            match exprs.iter().try_for_each(|e| e.eval(&p).map(|_| ())) {
                Ok(()) => out.push(p),
                Err(err) => last = Some(err),
            }
        }
        if out.is_empty() {
            return Err(ZeroTestError::Unsampleable(
                last.unwrap_or(EvalError::Singular { subexpr: String::new() }),
            ));
        }
        Ok(out)
    }
}

/// True iff `|e(p)| <= tol * scale(e, p)` at every sampled point, where the
/// scale is the value obtained with all sums replaced by sums of absolute
/// values.
pub fn is_zero(e: &Expr, cfg: &SamplerConfig) -> Result<bool, ZeroTestError> {
    if let Some(c) = e.as_num() {
        return Ok(num_traits::Zero::is_zero(c));
    }
    let mut sampler = cfg.sampler(0);
    let points = sampler.regular_points(&[e], cfg.points)?;
    for p in &points {
        let Ok((v, m)) = e.eval_with_scale(p) else { continue };
        if v.abs() > cfg.tol * m {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::jet::JetSpace;

    fn p(s: &str) -> Expr {
        parse(s, &JetSpace::new(&["x", "y"], "u")).unwrap()
    }

    #[test]
    fn trivial_identities() {
        let cfg = SamplerConfig::default();
        assert_eq!(is_zero(&p("x - x"), &cfg), Ok(true));
        assert_eq!(is_zero(&p("x*y - y*x + 1"), &cfg), Ok(false));
    }

    #[test]
    fn trig_identity_is_zero() {
        let cfg = SamplerConfig::default();
        assert_eq!(is_zero(&p("sin(x)^2 + cos(x)^2 - 1"), &cfg), Ok(true));
        assert_eq!(is_zero(&p("tan(y) - sin(y)/cos(y)"), &cfg), Ok(true));
        assert_eq!(is_zero(&p("sin(2*u) - 2*sin(u)*cos(u)"), &cfg), Ok(true));
        assert_eq!(is_zero(&p("sin(2*u) - 2*sin(u)*cos(u) + 0.000001*u_x"), &cfg), Ok(false));
    }

    #[test]
    fn denominators_stay_away_from_zero() {
        let cfg = SamplerConfig::default();
        assert_eq!(is_zero(&p("u_x/u_x - 1"), &cfg), Ok(true));
        assert_eq!(is_zero(&p("u_x^2/u_y - u_x*(u_x/u_y)"), &cfg), Ok(true));
    }

    #[test]
    fn unsampleable_when_always_singular() {
        let cfg = SamplerConfig::default();
        assert!(matches!(is_zero(&p("log(-1 - x^2)"), &cfg), Err(ZeroTestError::Unsampleable(_))));
    }

    #[test]
    fn deterministic_points() {
        let cfg = SamplerConfig::default();
        let e = p("x + u_xy/u_x");
        let a = cfg.sampler(3).regular_points(&[&e], 4).unwrap();
        let b = cfg.sampler(3).regular_points(&[&e], 4).unwrap();
        assert_eq!(a, b);
        let ux = p("u_x").as_sym().unwrap().clone();
        assert!(a.iter().all(|pt| pt[&ux].abs() >= 0.5));
    }

    #[test]
    fn seeds_parse() {
        assert_eq!(parse_seed("0xC0FFEE"), Some(0xC0FFEE));
        assert_eq!(parse_seed("7"), Some(7));
        assert_eq!(parse_seed("x"), None);
    }
}
