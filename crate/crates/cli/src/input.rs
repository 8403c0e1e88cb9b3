use std::path::Path;

use hardy_core::{ComplexRational, DirichletPoly, GaussInt, Scaled};

use crate::error::{CliError, CliResult};

/// Headroom kept below `i128::MAX` by the integer path, in bits.
const INT_BITS: f64 = 120.0;

/// A polynomial file in the fastest ring that represents it exactly.
pub enum Poly {
    Int(Scaled<DirichletPoly<GaussInt>>),
    Exact(DirichletPoly<ComplexRational>),
}

pub fn read_poly(path: &Path) -> CliResult<DirichletPoly<ComplexRational>> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    Ok(DirichletPoly::from_json_str(&text)?)
}

/// Gaussian-integer form when every coefficient of `P^r` stays inside
/// `i128`. Coefficients of `P^r` are bounded by `L1(P)^r` and the norm sum
/// by `L1(P)^{2r}`.
pub fn choose(d: DirichletPoly<ComplexRational>, max_exponent: f64) -> Poly {
    let Some(sp) = Scaled::from_exact(&d) else {
        return Poly::Exact(d);
    };
    let l1: f64 = sp.poly.terms().map(|(_, c)| c.re.unsigned_abs() as f64 + c.im.unsigned_abs() as f64).sum();
    let r = (max_exponent / 2.0).ceil().max(1.0);
    if l1 <= 1.0 || 2.0 * r * l1.log2() <= INT_BITS {
        Poly::Int(sp)
    } else {
        Poly::Exact(d)
    }
}
