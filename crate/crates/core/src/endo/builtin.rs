use std::sync::Arc;

use crate::group::{Endomorphism, FiniteGroup, Structure};
use crate::{Error, Result};

/// Left and right factors of a pair-structured group.
fn factors(g: &FiniteGroup) -> Option<(&Arc<FiniteGroup>, &Arc<FiniteGroup>)> {
    match g.structure() {
        Structure::Product { left, right } => Some((left, right)),
        Structure::Semidirect {
            normal, complement, ..
        } => Some((normal, complement)),
        _ => None,
    }
}

/// `x ↦ x^m` on one coordinate of a product or semidirect product, or on
/// the whole group otherwise (coordinate 0 only). Rejected when the result
/// is not a homomorphism.
pub fn scale(g: &Arc<FiniteGroup>, coord: usize, m: i64) -> Result<Endomorphism> {
    let map: Vec<usize> = match factors(g) {
        Some((l, r)) => {
            let rn = r.order();
            g.elements()
                .map(|x| {
                    let (a, h) = (x / rn, x % rn);
                    match coord {
                        0 => Ok(l.pow(a, m) * rn + h),
                        1 => Ok(a * rn + r.pow(h, m)),
                        _ => Err(Error::ParamOutOfRange(format!(
                            "coordinate {coord} of a pair"
                        ))),
                    }
                })
                .collect::<Result<_>>()?
        }
        None if coord == 0 => g.elements().map(|x| g.pow(x, m)).collect(),
        None => {
            return Err(Error::ParamOutOfRange(format!(
                "group has no coordinate {coord}"
            )))
        }
    };
    Endomorphism::new(g, map)
}

/// `scale(g, 0, m)`: for `Z/p^k ⋊ U(p^k)` this is `(a, u) ↦ (ma, u)`.
pub fn scale_first(g: &Arc<FiniteGroup>, m: i64) -> Result<Endomorphism> {
    scale(g, 0, m)
}

/// Sends coordinate `coord` of a pair to the identity.
pub fn project_away(g: &Arc<FiniteGroup>, coord: usize) -> Result<Endomorphism> {
    let (_, r) = factors(g).ok_or_else(|| {
        Error::Unsupported("project_away needs a product or semidirect product".into())
    })?;
    let rn = r.order();
    let map = match coord {
        0 => g.elements().map(|x| x % rn).collect(),
        1 => g.elements().map(|x| x / rn * rn).collect(),
        _ => {
            return Err(Error::ParamOutOfRange(format!(
                "coordinate {coord} of a pair"
            )))
        }
    };
    Endomorphism::new(g, map)
}
