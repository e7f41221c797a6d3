//! Open rational cones: pulling triangulation and fundamental parallelepipeds.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::linalg::{combinations, dot, kernel, maximal_minor_gcd, rank, solve_in_span, to_q, Vector};
use crate::error::{IgusaError, Result};
use crate::scalar::Rational;

/// The cone strictly positively spanned by `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenCone {
    pub generators: Vec<Vec<u64>>,
    pub simplicial: bool,
}

impl OpenCone {
    pub fn new(mut generators: Vec<Vec<u64>>) -> Self {
        generators.sort();
        generators.dedup();
        let rows: Vec<Vector> = generators.iter().map(|g| to_q(g)).collect();
        let simplicial = rank(&rows) == generators.len();
        OpenCone {
            generators,
            simplicial,
        }
    }

    pub fn dim(&self) -> usize {
        let rows: Vec<Vector> = self.generators.iter().map(|g| to_q(g)).collect();
        rank(&rows)
    }

    /// Whether the integer point `x` lies in this open cone.
    pub fn contains(&self, x: &[u64]) -> bool {
        let gens: Vec<Vector> = self.generators.iter().map(|g| to_q(g)).collect();
        let xq = to_q(x);
        if self.simplicial {
            return match solve_in_span(&gens, &xq) {
                Some(l) => l.iter().all(|v| v.is_positive()),
                None => false,
            };
        }
        let frame = ConeFrame::new(&gens);
        match frame.coords(&xq) {
            Some(c) => frame.in_relative_interior(&c),
            None => false,
        }
    }
}

/// Coordinates of a full-rank generator set with respect to a basis
/// drawn from it, together with the facet functionals of the cone.
struct ConeFrame {
    basis: Vec<Vector>,
    coords: Vec<Vector>,
    facets: Vec<Vector>,
}

impl ConeFrame {
    fn new(gens: &[Vector]) -> Self {
        let mut basis: Vec<Vector> = Vec::new();
        for g in gens {
            let mut trial = basis.clone();
            trial.push(g.clone());
            if rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        let coords: Vec<Vector> = gens
            .iter()
            .map(|g| solve_in_span(&basis, g).expect("generator lies in its own span"))
            .collect();
        let facets = cone_facets(&coords, basis.len());
        ConeFrame {
            basis,
            coords,
            facets,
        }
    }

    fn coords(&self, x: &[Rational]) -> Option<Vector> {
        solve_in_span(&self.basis, x)
    }

    fn in_relative_interior(&self, c: &[Rational]) -> bool {
        self.facets.iter().all(|u| dot(u, c).is_positive())
    }
}

/// Inward facet normals of the full-dimensional cone spanned by `pts` in Q^d.
fn cone_facets(pts: &[Vector], d: usize) -> Vec<Vector> {
    if d == 1 {
        return vec![vec![Rational::from_integer(1.into())]];
    }
    let mut out: Vec<Vector> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for combo in combinations(pts.len(), d - 1) {
        let rows: Vec<Vector> = combo.iter().map(|&i| pts[i].clone()).collect();
        let ker = kernel(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        let mut u = ker[0].clone();
        let vals: Vec<Rational> = pts.iter().map(|p| dot(&u, p)).collect();
        if vals.iter().any(|v| v.is_negative()) {
            if vals.iter().any(|v| v.is_positive()) {
                continue;
            }
            u = u.into_iter().map(|x| -x).collect();
        }
        let on: Vec<usize> = (0..pts.len()).filter(|&i| vals[i].is_zero()).collect();
        if seen.insert(on) {
            out.push(u);
        }
    }
    out
}

/// Maximal simplices (as index sets into `pts`) of the pulling triangulation.
fn pulling(pts: &[Vector], idx: &[usize], d: usize, order: &[usize]) -> Vec<Vec<usize>> {
    if idx.len() == d {
        return vec![idx.to_vec()];
    }
    // Pull the generator that comes first in `order`.
    let v = *order.iter().find(|i| idx.contains(i)).unwrap();
    let sub: Vec<Vector> = idx.iter().map(|&i| pts[i].clone()).collect();
    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for combo in combinations(idx.len(), d - 1) {
        let rows: Vec<Vector> = combo.iter().map(|&i| sub[i].clone()).collect();
        let ker = kernel(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        let u = &ker[0];
        let vals: Vec<Rational> = sub.iter().map(|p| dot(u, p)).collect();
        if vals.iter().any(|x| x.is_negative()) && vals.iter().any(|x| x.is_positive()) {
            continue;
        }
        let facet: Vec<usize> = (0..idx.len())
            .filter(|&i| vals[i].is_zero())
            .map(|i| idx[i])
            .collect();
        if facet.contains(&v) || !seen.insert(facet.clone()) {
            continue;
        }
        // Recurse inside the facet's span.
        let fpts: Vec<Vector> = facet.iter().map(|&i| pts[i].clone()).collect();
        let frame = ConeFrame::new(&fpts);
        let local: Vec<Vector> = frame.coords.clone();
        let local_idx: Vec<usize> = (0..facet.len()).collect();
        let local_order: Vec<usize> = order
            .iter()
            .filter_map(|g| facet.iter().position(|f| f == g))
            .collect();
        for simplex in pulling(&local, &local_idx, d - 1, &local_order) {
            let mut s: Vec<usize> = simplex.iter().map(|&i| facet[i]).collect();
            s.push(v);
            s.sort();
            out.push(s);
        }
    }
    out
}

/// Partition of an open cone into open simplicial cones on its generators.
pub fn triangulate_open_cone(cone: &OpenCone) -> Vec<OpenCone> {
    if cone.simplicial {
        return vec![cone.clone()];
    }
    let gens: Vec<Vector> = cone.generators.iter().map(|g| to_q(g)).collect();
    let frame = ConeFrame::new(&gens);
    let d = frame.basis.len();
    // Pull generators in lexicographically decreasing order.
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| cone.generators[b].cmp(&cone.generators[a]));
    let all: Vec<usize> = (0..gens.len()).collect();
    let simplices = pulling(&frame.coords, &all, d, &order);

    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in &simplices {
        for mask in 1u32..(1u32 << s.len()) {
            let sub: Vec<usize> = (0..s.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| s[i])
                .collect();
            faces.insert(sub);
        }
    }
    faces
        .into_iter()
        .filter(|sub| {
            let mut c = vec![Rational::zero(); d];
            for &i in sub {
                for (cj, x) in c.iter_mut().zip(&frame.coords[i]) {
                    *cj += x;
                }
            }
            frame.in_relative_interior(&c)
        })
        .map(|sub| OpenCone::new(sub.iter().map(|&i| cone.generators[i].clone()).collect()))
        .collect()
}

/// H = N^n ∩ {Σ λ_j a_j : 0 < λ_j ≤ 1} for a simplicial cone.
pub fn parallelepiped_points(cone: &OpenCone) -> Result<Vec<Vec<u64>>> {
    if !cone.simplicial {
        return Err(IgusaError::Geometry(
            "parallelepiped points need a simplicial cone".into(),
        ));
    }
    let gens = &cone.generators;
    let e = gens.len();
    if e == 0 {
        return Ok(Vec::new());
    }
    let n = gens[0].len();
    // λ_j ∈ (1/D)Z where D is the gcd of the maximal minors.
    let dd = maximal_minor_gcd(gens).to_u64().unwrap().max(1);
    let total = dd.checked_pow(e as u32).filter(|&t| t <= 50_000_000).ok_or_else(|| {
        IgusaError::Geometry(format!("parallelepiped too large (index {dd}, {e} generators)"))
    })?;
    let mut out = BTreeSet::new();
    let mut lam = vec![1u64; e];
    for _ in 0..total {
        let mut ok = true;
        let mut pt = vec![0u64; n];
        for (i, p) in pt.iter_mut().enumerate() {
            let s: u64 = (0..e).map(|j| lam[j] * gens[j][i]).sum();
            if !s.is_multiple_of(dd) {
                ok = false;
                break;
            }
            *p = s / dd;
        }
        if ok {
            out.insert(pt);
        }
        for l in lam.iter_mut() {
            if *l < dd {
                *l += 1;
                break;
            }
            *l = 1;
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallelepipeds_of_examples() {
        let c = OpenCone::new(vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(parallelepiped_points(&c).unwrap(), vec![vec![1, 2], vec![2, 4]]);
        let c = OpenCone::new(vec![vec![2, 3], vec![3, 2]]);
        let h: Vec<Vec<u64>> = (1..=5).map(|i| vec![i, i]).collect();
        assert_eq!(parallelepiped_points(&c).unwrap(), h);
        let c = OpenCone::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(parallelepiped_points(&c).unwrap(), vec![vec![1, 1, 1]]);
        let c = OpenCone::new(vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert!(parallelepiped_points(&c).is_err());
    }

    #[test]
    fn triangulation_of_three_rays() {
        let c = OpenCone::new(vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert!(!c.simplicial);
        let mut parts = triangulate_open_cone(&c);
        parts.sort();
        assert_eq!(
            parts,
            vec![
                OpenCone::new(vec![vec![0, 1], vec![1, 1]]),
                OpenCone::new(vec![vec![1, 0], vec![1, 1]]),
                OpenCone::new(vec![vec![1, 1]]),
            ]
        );
    }

    #[test]
    fn simplicial_is_identity() {
        let c = OpenCone::new(vec![vec![2, 3], vec![3, 2]]);
        assert_eq!(triangulate_open_cone(&c), vec![c]);
    }

    #[test]
    fn membership() {
        let c = OpenCone::new(vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert!(c.contains(&[3, 5]));
        assert!(!c.contains(&[0, 5]));
        let r = OpenCone::new(vec![vec![1, 2, 0]]);
        assert!(r.contains(&[2, 4, 0]));
        assert!(!r.contains(&[2, 4, 1]));
    }
}
