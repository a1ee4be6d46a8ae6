use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::grid::GridFunction;

use super::affine_gap;

/// A conjugate value with the flat index of the maximizing node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witnessed {
    pub value: f64,
    pub argmax: usize,
}

fn check_duals(f: &GridFunction, duals: &[Vec<f64>]) -> Result<()> {
    for x in duals {
        if x.len() != f.dim() {
            return Err(Error::InvalidArgument(format!(
                "dual point of dimension {} for a {}-dimensional grid",
                x.len(),
                f.dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("dual points must be finite".into()));
        }
    }
    Ok(())
}

/// Exhaustive conjugate: for every dual point, the maximum of `⟨x, y⟩ - f(y)`
/// over all nodes with finite value, with the lexicographically smallest
/// maximizing node as witness.
pub fn brute_conjugate_with_witness(
    f: &GridFunction,
    duals: &[Vec<f64>],
) -> Result<Vec<Witnessed>> {
    check_duals(f, duals)?;
    let nodes: Vec<(usize, Vec<f64>, f64)> = (0..f.len())
        .filter_map(|i| f.value(i).finite().map(|v| (i, f.node(i), v)))
        .collect();
    if nodes.is_empty() {
        return Err(Error::IdenticallyInfinite);
    }
    Ok(duals
        .iter()
        .map(|x| {
            let mut best = Witnessed {
                value: f64::NEG_INFINITY,
                argmax: nodes[0].0,
            };
            for (i, y, fy) in &nodes {
                let v = affine_gap(x, y, *fy);
                if v > best.value {
                    best = Witnessed {
                        value: v,
                        argmax: *i,
                    };
                }
            }
            best
        })
        .collect())
}

pub fn brute_conjugate(f: &GridFunction, duals: &[Vec<f64>]) -> Result<Vec<ExtendedReal>> {
    Ok(brute_conjugate_with_witness(f, duals)?
        .into_iter()
        .map(|w| ExtendedReal::Finite(w.value))
        .collect())
}
