use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixture::FiniteMixture;

/// Quantities that can be tabulated over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Cdf,
    Pdf,
    Sf,
    Rhr,
    /// `F_V / F_U`
    CdfRatio,
    /// `f_V / f_U`
    PdfRatio,
    /// `h_U / h_V`
    RhrRatio,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Cdf,
        Quantity::Pdf,
        Quantity::Sf,
        Quantity::Rhr,
        Quantity::CdfRatio,
        Quantity::PdfRatio,
        Quantity::RhrRatio,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Quantity::Cdf => "cdf",
            Quantity::Pdf => "pdf",
            Quantity::Sf => "sf",
            Quantity::Rhr => "rhr",
            Quantity::CdfRatio => "cdf_ratio",
            Quantity::PdfRatio => "pdf_ratio",
            Quantity::RhrRatio => "rhr_ratio",
        }
    }

    pub fn from_id(id: &str) -> Option<Quantity> {
        Quantity::ALL.into_iter().find(|q| q.id() == id)
    }

    pub fn is_ratio(self) -> bool {
        matches!(self, Quantity::CdfRatio | Quantity::PdfRatio | Quantity::RhrRatio)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Tabulated curves sharing one x column. Missing entries lie outside a
/// curve's domain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Curve {
    pub labels: Vec<String>,
    pub x: Vec<f64>,
    pub columns: Vec<Vec<Option<f64>>>,
}

impl Curve {
    /// Points where column `i` is defined.
    pub fn defined(&self, i: usize) -> Vec<(f64, f64)> {
        self.x
            .iter()
            .zip(&self.columns[i])
            .filter_map(|(&x, v)| v.map(|v| (x, v)))
            .collect()
    }

    /// CSV with a header row, 17 significant digits and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (row, &x) in self.x.iter().enumerate() {
            out.push_str(&crate::numeric::format_sig17(x));
            for col in &self.columns {
                out.push(',');
                if let Some(v) = col[row] {
                    out.push_str(&crate::numeric::format_sig17(v));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn ratio(num: f64, den: f64, floor: f64) -> Option<f64> {
    if den > floor {
        let r = num / den;
        r.is_finite().then_some(r)
    } else {
        None
    }
}

fn rhr(m: &FiniteMixture, x: f64, floor: f64) -> Option<f64> {
    m.rhr_with_floor(x, floor).ok().filter(|h| h.is_finite())
}

/// Evaluates `q` for the pair at every grid point. Ratios are undefined where
/// their denominator is at or below `floor`.
pub fn evaluate(q: Quantity, u: &FiniteMixture, v: &FiniteMixture, xs: &[f64], floor: f64) -> Curve {
    let pair = |f: &dyn Fn(&FiniteMixture, f64) -> Option<f64>, name: &str| Curve {
        labels: vec![format!("{name}_U"), format!("{name}_V")],
        x: xs.to_vec(),
        columns: vec![
            xs.iter().map(|&x| f(u, x)).collect(),
            xs.iter().map(|&x| f(v, x)).collect(),
        ],
    };
    let single = |f: &dyn Fn(f64) -> Option<f64>| Curve {
        labels: vec!["ratio".to_string()],
        x: xs.to_vec(),
        columns: vec![xs.iter().map(|&x| f(x)).collect()],
    };
    match q {
        Quantity::Cdf => pair(&|m, x| Some(m.cdf(x)), "cdf"),
        Quantity::Pdf => pair(&|m, x| Some(m.pdf(x)), "pdf"),
        Quantity::Sf => pair(&|m, x| Some(m.sf(x)), "sf"),
        Quantity::Rhr => pair(&|m, x| rhr(m, x, floor), "rhr"),
        Quantity::CdfRatio => single(&|x| ratio(v.cdf(x), u.cdf(x), floor)),
        Quantity::PdfRatio => single(&|x| ratio(v.pdf(x), u.pdf(x), floor)),
        Quantity::RhrRatio => single(&|x| {
            let hu = rhr(u, x, floor)?;
            let hv = rhr(v, x, floor)?;
            (hv > 0.0).then(|| hu / hv).filter(|r| r.is_finite())
        }),
    }
}

/// Like [`evaluate`], but fails when no grid point lies in the quantity's domain.
pub fn evaluate_checked(
    q: Quantity,
    u: &FiniteMixture,
    v: &FiniteMixture,
    xs: &[f64],
    floor: f64,
) -> Result<Curve> {
    let c = evaluate(q, u, v, xs, floor);
    if c.columns.iter().all(|col| col.iter().all(Option::is_none)) {
        return Err(Error::InsufficientDomain { usable: 0 });
    }
    Ok(c)
}
