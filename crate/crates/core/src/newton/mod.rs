//! Newton polyhedra, their face lattice, and the normal fan.

pub mod cone;
pub mod linalg;

pub use cone::{parallelepiped_points, triangulate_open_cone, OpenCone};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{IgusaError, Result};
use crate::poly::IntPolynomial;
use linalg::{kernel, primitive, rank, to_q, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<u64>,
    pub m: u64,
    pub abs: u64,
}

/// A proper face {x ∈ Γ : ⟨w,x⟩ = m(w)} = conv(points) + cone(e_i : i ∈ recession).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Support points on the face.
    pub points: Vec<Vec<u64>>,
    /// Coordinate directions e_i contained in the face's recession cone.
    pub recession: Vec<usize>,
    pub dim: usize,
    pub containing_facets: Vec<usize>,
    pub cone_generators: Vec<Vec<u64>>,
}

impl Face {
    pub fn is_compact(&self) -> bool {
        self.recession.is_empty()
    }

    pub fn contains_point(&self, x: &[u64]) -> bool {
        self.points.iter().any(|p| p.as_slice() == x)
    }

    /// The open cone Δ_γ of weights whose first meet locus is this face.
    pub fn cone(&self) -> OpenCone {
        OpenCone::new(self.cone_generators.clone())
    }
}

#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    pub n: usize,
    pub support: Vec<Vec<u64>>,
    pub vertices: Vec<Vec<u64>>,
    pub facets: Vec<Facet>,
    pub faces: Vec<Face>,
}

fn exps(f: &IntPolynomial) -> Vec<Vec<u64>> {
    f.terms()
        .map(|(e, _)| e.0.iter().map(|&x| x as u64).collect())
        .collect()
}

fn dot_u(a: &[u64], x: &[u64]) -> u64 {
    a.iter().zip(x).map(|(a, b)| a * b).sum()
}

impl NewtonPolyhedron {
    pub fn new(f: &IntPolynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(IgusaError::Geometry("empty support".into()));
        }
        if f.has_constant_term() {
            return Err(IgusaError::Geometry(
                "f(0) must vanish for Newton polyhedron analysis".into(),
            ));
        }
        Self::from_support(f.nvars(), exps(f))
    }

    pub fn from_support(n: usize, mut support: Vec<Vec<u64>>) -> Result<Self> {
        support.sort();
        support.dedup();
        if support.is_empty() {
            return Err(IgusaError::Geometry("empty support".into()));
        }
        if support.iter().any(|s| s.len() != n) {
            return Err(IgusaError::DimensionMismatch {
                expected: n,
                found: support.iter().map(|s| s.len()).find(|&l| l != n).unwrap(),
            });
        }
        let facets = enumerate_facets(n, &support);
        let mut poly = NewtonPolyhedron {
            n,
            support,
            vertices: Vec::new(),
            facets,
            faces: Vec::new(),
        };
        poly.faces = poly.enumerate_faces();
        poly.vertices = poly
            .faces
            .iter()
            .filter(|f| f.dim == 0)
            .map(|f| f.points[0].clone())
            .collect();
        poly.vertices.sort();
        Ok(poly)
    }

    /// m(a) = min over the support of ⟨a, x⟩.
    pub fn m_of(&self, a: &[u64]) -> u64 {
        self.support.iter().map(|x| dot_u(a, x)).min().unwrap()
    }

    /// Points of the support attaining m(a), plus the zero coordinates of a.
    fn meet_key(&self, a: &[u64]) -> (Vec<Vec<u64>>, Vec<usize>) {
        let m = self.m_of(a);
        let pts = self
            .support
            .iter()
            .filter(|x| dot_u(a, x) == m)
            .cloned()
            .collect();
        let zeros = (0..self.n).filter(|&i| a[i] == 0).collect();
        (pts, zeros)
    }

    /// The face F(a) where ⟨a,·⟩ attains its minimum on Γ; `None` for a = 0.
    pub fn first_meet_locus(&self, a: &[u64]) -> Option<&Face> {
        if a.iter().all(|&x| x == 0) {
            return None;
        }
        let key = self.meet_key(a);
        self.faces
            .iter()
            .find(|f| f.points == key.0 && f.recession == key.1)
    }

    fn face_from_key(&self, points: Vec<Vec<u64>>, recession: Vec<usize>) -> Face {
        let m_ok = |fa: &Facet| {
            points.iter().all(|x| dot_u(&fa.normal, x) == fa.m)
                && recession.iter().all(|&i| fa.normal[i] == 0)
        };
        let containing: Vec<usize> = (0..self.facets.len())
            .filter(|&i| m_ok(&self.facets[i]))
            .collect();
        let mut rows: Vec<Vector> = points
            .iter()
            .skip(1)
            .map(|x| {
                x.iter()
                    .zip(&points[0])
                    .map(|(a, b)| crate::scalar::int(*a as i64 - *b as i64))
                    .collect()
            })
            .collect();
        for &i in &recession {
            let mut e = vec![0u64; self.n];
            e[i] = 1;
            rows.push(to_q(&e));
        }
        let dim = rank(&rows);
        let gens = containing
            .iter()
            .map(|&i| self.facets[i].normal.clone())
            .collect();
        Face {
            points,
            recession,
            dim,
            containing_facets: containing,
            cone_generators: gens,
        }
    }

    fn enumerate_faces(&self) -> Vec<Face> {
        let k = self.facets.len();
        let mut keys: BTreeSet<(Vec<Vec<u64>>, Vec<usize>)> = BTreeSet::new();
        for mask in 1u64..(1u64 << k) {
            let mut w = vec![0u64; self.n];
            for (i, fa) in self.facets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (wj, aj) in w.iter_mut().zip(&fa.normal) {
                        *wj += aj;
                    }
                }
            }
            keys.insert(self.meet_key(&w));
        }
        let mut faces: Vec<Face> = keys
            .into_iter()
            .map(|(p, r)| self.face_from_key(p, r))
            .collect();
        faces.sort_by(|a, b| {
            (a.dim, &a.recession, &a.points).cmp(&(b.dim, &b.recession, &b.points))
        });
        faces
    }

    /// Facets with m ≠ 0 (the ones contributing candidate poles).
    pub fn essential_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.m != 0)
    }

    /// The open cones Δ_γ, one per proper face.
    pub fn fan_partition(&self) -> Vec<(&Face, OpenCone)> {
        self.faces.iter().map(|f| (f, f.cone())).collect()
    }
}

/// Every facet of conv(support) + R^n_+, as primitive (normal, m).
fn enumerate_facets(n: usize, support: &[Vec<u64>]) -> Vec<Facet> {
    // Candidates: hyperplanes through a support point spanned by n-1
    // independent directions chosen among point differences and unit vectors.
    let mut dirs: Vec<Vector> = Vec::new();
    for i in 0..n {
        let mut e = vec![0u64; n];
        e[i] = 1;
        dirs.push(to_q(&e));
    }
    let mut seen: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for (bi, base) in support.iter().enumerate() {
        let mut cand = dirs.clone();
        for x in &support[bi + 1..] {
            cand.push(
                x.iter()
                    .zip(base)
                    .map(|(a, b)| crate::scalar::int(*a as i64 - *b as i64))
                    .collect(),
            );
        }
        for combo in linalg::combinations(cand.len(), n - 1) {
            let rows: Vec<Vector> = combo.iter().map(|&i| cand[i].clone()).collect();
            let ker = kernel(&rows, n);
            if ker.len() != 1 {
                continue;
            }
            let mut a = primitive(&ker[0]);
            if a.iter().any(|x| x.is_negative()) {
                if a.iter().any(|x| x.is_positive()) {
                    continue;
                }
                a = a.into_iter().map(|x| -x).collect();
            }
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let a: Vec<u64> = a.iter().map(|x| x.to_u64().unwrap()).collect();
            let m = dot_u(&a, base);
            if support.iter().all(|x| dot_u(&a, x) >= m) {
                seen.insert(a, m);
            }
        }
    }
    let mut out: Vec<Facet> = seen
        .into_iter()
        .map(|(normal, m)| {
            let abs = normal.iter().sum();
            Facet { normal, m, abs }
        })
        .collect();
    // Drop hyperplanes that only support a lower-dimensional face.
    out.retain(|fa| facet_dimension(n, support, fa) == n - 1);
    out.sort_by(|a, b| (b.m, &b.normal).cmp(&(a.m, &a.normal)));
    out
}

fn facet_dimension(n: usize, support: &[Vec<u64>], fa: &Facet) -> usize {
    let pts: Vec<&Vec<u64>> = support
        .iter()
        .filter(|x| dot_u(&fa.normal, x) == fa.m)
        .collect();
    let mut rows: Vec<Vector> = pts
        .iter()
        .skip(1)
        .map(|x| {
            x.iter()
                .zip(pts[0])
                .map(|(a, b)| crate::scalar::int(*a as i64 - *b as i64))
                .collect()
        })
        .collect();
    for i in 0..n {
        if fa.normal[i] == 0 {
            let mut e = vec![0u64; n];
            e[i] = 1;
            rows.push(to_q(&e));
        }
    }
    rank(&rows)
}

/// Restriction f_γ: the terms of f whose exponents lie on γ.
pub fn restrict_to_face(f: &IntPolynomial, face: &Face) -> IntPolynomial {
    f.restrict(|e| {
        let v: Vec<u64> = e.0.iter().map(|&x| x as u64).collect();
        face.contains_point(&v)
    })
}

/// Integer weights (k_1..k_n) → the integer ⟨k, x⟩ minimum, as BigInt.
pub fn m_of_big(support: &[Vec<u64>], k: &[u64]) -> BigInt {
    BigInt::from(support.iter().map(|x| dot_u(k, x)).min().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn poly(s: &str) -> IntPolynomial {
        let vars = crate::poly::infer_variables(s);
        parse_polynomial(s, &vars).unwrap()
    }

    fn facet_set(p: &NewtonPolyhedron) -> Vec<(Vec<u64>, u64)> {
        let mut v: Vec<_> = p.facets.iter().map(|f| (f.normal.clone(), f.m)).collect();
        v.sort();
        v
    }

    #[test]
    fn example_facets() {
        let p = NewtonPolyhedron::new(&poly("x^2+x*y+y^2")).unwrap();
        assert_eq!(
            facet_set(&p),
            vec![(vec![0, 1], 0), (vec![1, 0], 0), (vec![1, 1], 2)]
        );
        let p = NewtonPolyhedron::new(&poly("x^2*y^2+x^5+y^5")).unwrap();
        assert_eq!(
            facet_set(&p),
            vec![
                (vec![0, 1], 0),
                (vec![1, 0], 0),
                (vec![2, 3], 10),
                (vec![3, 2], 10)
            ]
        );
        let p = NewtonPolyhedron::new(&poly("x^7")).unwrap();
        assert_eq!(facet_set(&p), vec![(vec![1], 7)]);
        let p = NewtonPolyhedron::new(&poly("x^2+y^2+z^2")).unwrap();
        assert_eq!(p.facets.len(), 4);
        assert!(p.facets.iter().any(|f| f.normal == vec![1, 1, 1] && f.m == 2));
    }

    #[test]
    fn m_of_and_first_meet() {
        let p = NewtonPolyhedron::new(&poly("x^2*y^2+x^5+y^5")).unwrap();
        assert_eq!(p.m_of(&[1, 2]), 5);
        assert_eq!(p.m_of(&[0, 0]), 0);
        let v = p.first_meet_locus(&[1, 1]).unwrap();
        assert_eq!(v.points, vec![vec![2, 2]]);
        assert_eq!(v.dim, 0);
        let e = p.first_meet_locus(&[2, 3]).unwrap();
        assert_eq!(e.points, vec![vec![2, 2], vec![5, 0]]);
        let q = NewtonPolyhedron::new(&poly("x^2+x*y+y^2")).unwrap();
        assert_eq!(q.m_of(&[1, 1]), 2);
        let r = q.first_meet_locus(&[1, 0]).unwrap();
        assert_eq!(r.points, vec![vec![0, 2]]);
        assert_eq!(r.recession, vec![1]);
    }

    #[test]
    fn fan_sizes_match_examples() {
        let p = NewtonPolyhedron::new(&poly("x^2+x*y+y^2")).unwrap();
        assert_eq!(p.fan_partition().len(), 5);
        let p = NewtonPolyhedron::new(&poly("x^2*y^2+x^5+y^5")).unwrap();
        assert_eq!(p.fan_partition().len(), 7);
        let p = NewtonPolyhedron::new(&poly("x^3")).unwrap();
        assert_eq!(p.fan_partition().len(), 1);
    }

    #[test]
    fn face_duality() {
        for s in ["x^2+x*y+y^2", "x^2*y^2+x^5+y^5", "x^2+y^2+z^2", "x*y*z + x^3 + y^4 + z^5", "x*y + y*z^2"] {
            let p = NewtonPolyhedron::new(&poly(s)).unwrap();
            for f in &p.faces {
                let gens: Vec<Vector> = f.cone_generators.iter().map(|g| to_q(g)).collect();
                assert_eq!(f.dim + rank(&gens), p.n, "{s}: {f:?}");
            }
        }
    }

    #[test]
    fn restriction() {
        let f = poly("x^2*y^2+x^5+y^5");
        let p = NewtonPolyhedron::new(&f).unwrap();
        let v = p.first_meet_locus(&[1, 1]).unwrap();
        assert_eq!(restrict_to_face(&f, v), poly("x^2*y^2"));
        let g = poly("x^2+x*y+y^2");
        let q = NewtonPolyhedron::new(&g).unwrap();
        let c = q.first_meet_locus(&[1, 1]).unwrap();
        assert_eq!(restrict_to_face(&g, c), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(NewtonPolyhedron::new(&poly("x+1")).is_err());
        assert!(NewtonPolyhedron::new(&IntPolynomial::zero(2)).is_err());
    }
}
