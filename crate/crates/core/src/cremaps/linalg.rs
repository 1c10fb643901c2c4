use std::collections::BTreeSet;

use crate::exactmath::{Cyclo, MultiPoly};

/// Solves Σ cᵢ·basisᵢ = target over the constants, returning one solution.
pub fn span_coefficients(target: &MultiPoly, basis: &[MultiPoly]) -> Option<Vec<Cyclo>> {
    let monos: BTreeSet<Vec<u32>> = basis
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect();
    let k = basis.len();
    let mut rows: Vec<Vec<Cyclo>> = monos
        .iter()
        .map(|e| {
            basis
                .iter()
                .map(|b| b.coeff(e))
                .chain(std::iter::once(target.coeff(e)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..=k {
                    let t = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Cyclo::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][k].clone();
    }
    Some(sol)
}
