//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Settings for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance per panel.
    pub tol: f64,
    pub max_depth: u32,
    /// Hard cap on integrand evaluations per panel.
    pub max_evals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            tol: 1e-9,
            max_depth: 40,
            max_evals: 4_000_000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `cfg.tol`.
///
/// Segments that reach `max_depth` without meeting their share of the
/// tolerance, or an exhausted evaluation budget, produce
/// [`Error::Quadrature`] carrying the estimate achieved so far.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_simpson(f, b, a, cfg).map(|v| -v);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut evals = 3usize;
    let mut stack = vec![Segment {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol: cfg.tol,
        depth: 0,
    }];
    let mut acc = CompensatedSum::new();
    let mut converged = true;
    while let Some(seg) = stack.pop() {
        let m = 0.5 * (seg.a + seg.b);
        let lm = 0.5 * (seg.a + m);
        let rm = 0.5 * (m + seg.b);
        let flm = f(lm);
        let frm = f(rm);
        evals += 2;
        let left = simpson(seg.a, m, seg.fa, flm, seg.fm);
        let right = simpson(m, seg.b, seg.fm, frm, seg.fb);
        let delta = left + right - seg.whole;
        let tiny = m <= seg.a || m >= seg.b;
        if delta.abs() <= 15.0 * seg.tol || tiny {
            acc.add(left + right + delta / 15.0);
            continue;
        }
        if !delta.is_finite() {
            return Err(Error::Quadrature { estimate: f64::NAN });
        }
        if seg.depth >= cfg.max_depth || evals >= cfg.max_evals {
            converged = false;
            acc.add(left + right + delta / 15.0);
            continue;
        }
        let half = 0.5 * seg.tol;
        stack.push(Segment {
            a: m,
            b: seg.b,
            fa: seg.fm,
            fm: frm,
            fb: seg.fb,
            whole: right,
            tol: half,
            depth: seg.depth + 1,
        });
        stack.push(Segment {
            a: seg.a,
            b: m,
            fa: seg.fa,
            fm: flm,
            fb: seg.fm,
            whole: left,
            tol: half,
            depth: seg.depth + 1,
        });
    }
    let estimate = acc.value();
    if converged {
        Ok(estimate)
    } else {
        Err(Error::Quadrature { estimate })
    }
}

/// Integrates `f` over `[a, b]` after the substitution `x = a + (b - a) u^q`,
/// which flattens an integrable singularity of the form `(x - a)^(p - 1)` at
/// the left end for any `p > 1/q`.
pub fn integrate_left_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let w = b - a;
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let x = a + w * u.powf(q);
        let v = f(x) * w * q * u.powf(q - 1.0);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive_simpson(g, 0.0, 1.0, cfg)
}
