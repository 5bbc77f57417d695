//! Derivative-free golden-section search on a bounded interval.

use crate::error::Result;

/// `(sqrt(5) - 1) / 2`
pub const INV_GOLDEN_RATIO: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearchOutcome {
    pub t: f64,
    pub probes: u64,
    /// False when the probe cap was hit before the bracket shrank to `tol`.
    pub converged: bool,
    /// Final bracket.
    pub lo: f64,
    pub hi: f64,
}

/// Minimize `phi` over `[lo, hi]` by golden-section search.
///
/// Each probe shrinks the bracket by the golden ratio; the search stops as
/// soon as the bracket width is at most `tol` and returns its midpoint, so a
/// bracket of width `w` costs `2 + ceil(ln(tol / w) / ln(0.618))` probes
/// minus one. If `max_probes` runs out first, the best probe seen is returned.
pub fn golden_section<F>(mut phi: F, mut lo: f64, mut hi: f64, tol: f64, max_probes: u64) -> Result<LineSearchOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut probes = 0u64;
    let mut best = (f64::INFINITY, 0.5 * (lo + hi));
    let mut probe = |t: f64, probes: &mut u64, best: &mut (f64, f64)| -> Result<f64> {
        let v = phi(t)?;
        *probes += 1;
        if v < best.0 {
            *best = (v, t);
        }
        Ok(v)
    };
    let done = |lo: f64, hi: f64, probes: u64, best: (f64, f64), converged: bool| LineSearchOutcome {
        t: if converged || probes == 0 { 0.5 * (lo + hi) } else { best.1 },
        probes,
        converged,
        lo,
        hi,
    };

    if hi - lo <= tol {
        return Ok(done(lo, hi, 0, best, true));
    }
    if max_probes < 2 {
        return Ok(done(lo, hi, 0, best, false));
    }
    let mut c = hi - INV_GOLDEN_RATIO * (hi - lo);
    let mut d = lo + INV_GOLDEN_RATIO * (hi - lo);
    let mut fc = probe(c, &mut probes, &mut best)?;
    let mut fd = probe(d, &mut probes, &mut best)?;
    loop {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            if hi - lo <= tol {
                return Ok(done(lo, hi, probes, best, true));
            }
            if probes >= max_probes {
                return Ok(done(lo, hi, probes, best, false));
            }
            c = hi - INV_GOLDEN_RATIO * (hi - lo);
            fc = probe(c, &mut probes, &mut best)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            if hi - lo <= tol {
                return Ok(done(lo, hi, probes, best, true));
            }
            if probes >= max_probes {
                return Ok(done(lo, hi, probes, best, false));
            }
            d = lo + INV_GOLDEN_RATIO * (hi - lo);
            fd = probe(d, &mut probes, &mut best)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let out = golden_section(|t| Ok((2.0 + t) * (2.0 + t)), -10.0, 10.0, 0.0025, u64::MAX).unwrap();
        assert!(out.converged);
        assert!((out.t + 2.0).abs() <= 0.0025);
        assert!(out.hi - out.lo <= 0.0025);
    }

    #[test]
    fn probe_count_matches_shrink_arithmetic() {
        let out = golden_section(|t| Ok(t * t), -10.0, 10.0, 0.0025, u64::MAX).unwrap();
        // 19 shrinks are needed to go from 20 to 0.0025; the first two probes
        // seed the bracket and the last shrink needs no new probe.
        let shrinks = ((0.0025f64 / 20.0).ln() / INV_GOLDEN_RATIO.ln()).ceil() as u64;
        assert_eq!(shrinks, 19);
        assert_eq!(out.probes, shrinks + 1);
    }

    #[test]
    fn probe_cap_returns_best_so_far() {
        let out = golden_section(|t| Ok((t - 3.0).abs()), -10.0, 10.0, 1e-6, 5).unwrap();
        assert!(!out.converged);
        assert_eq!(out.probes, 5);
        assert!(out.t >= out.lo - 10.0 && out.t <= 10.0);
        let none = golden_section(Ok, -1.0, 1.0, 1e-3, 1).unwrap();
        assert_eq!(none.probes, 0);
    }
}
