//! Assembly of Z(s, f, χ) over the normal fan of the Newton polyhedron.
//!
//! Z = Z(O^{×n}, f) + Σ_γ Σ_{Δ ⊆ Δ_γ simplicial} Z_Δ, where Z_Δ sums
//! q^{-|k|} t^{m(k)} Z(O^{×n}, f_k) over the lattice points k of Δ and
//! f_k(y) = p^{-m(k)} f(p^{k_1} y_1, …, p^{k_n} y_n).

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{IgusaError, Result};
use crate::newton::{
    parallelepiped_points, restrict_to_face, triangulate_open_cone, Face, NewtonPolyhedron, OpenCone,
};
use crate::padic::{Character, PAdicContext};
use crate::poly::IntPolynomial;
use crate::ratfun::{DenFactor, Denominator};
use num_traits::One;

use crate::scalar::{q_pow_neg, Cyclo};
use crate::spf::{singular_locus_mod, stability_exponent, ResidueDomain, SpfEngine, Zeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineMode {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeRequest {
    Auto,
    A,
    B,
}

impl std::str::FromStr for ModeRequest {
    type Err = IgusaError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(ModeRequest::Auto),
            "a" => Ok(ModeRequest::A),
            "b" => Ok(ModeRequest::B),
            _ => Err(IgusaError::Config(format!("unknown mode `{s}` (auto|A|B)"))),
        }
    }
}

/// Mod-p non-degeneracy of one face restriction (or of f itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceVerdict {
    /// Index into the polyhedron's faces; `None` for Γ(f) itself.
    pub face: Option<usize>,
    pub torus_singular_points: usize,
}

impl FaceVerdict {
    pub fn nondegenerate(&self) -> bool {
        self.torus_singular_points == 0
    }
}

#[derive(Clone, Debug)]
pub struct ConeContribution {
    pub face: usize,
    pub cone: OpenCone,
    pub h: Vec<Vec<u64>>,
    /// Z(O^{×n}, f_γ, χ).
    pub torus_factor: Zeta,
    /// Σ_{h∈H} q^{-|h|} t^{m(h)} / Π_j (1 - q^{-|a_j|} t^{m(a_j)}).
    pub series_factor: Zeta,
    /// Z_Δ(s, f, χ); equals torus_factor · series_factor in mode A.
    pub value: Zeta,
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub mode: EngineMode,
    pub gate: Vec<FaceVerdict>,
    pub torus_term: Zeta,
    pub cones: Vec<ConeContribution>,
    pub total: Zeta,
}

pub struct ZetaEngine {
    f: IntPolynomial,
    poly: NewtonPolyhedron,
    spf: SpfEngine,
    stab: RwLock<HashMap<IntPolynomial, u32>>,
}

impl ZetaEngine {
    pub fn new(f: IntPolynomial, ctx: PAdicContext, chi: Character) -> Result<Self> {
        if chi.p() != ctx.p {
            return Err(IgusaError::Config("character and context use different primes".into()));
        }
        let poly = NewtonPolyhedron::new(&f)?;
        Ok(ZetaEngine {
            f,
            poly,
            spf: SpfEngine::new(ctx, chi),
            stab: RwLock::new(HashMap::new()),
        })
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn polyhedron(&self) -> &NewtonPolyhedron {
        &self.poly
    }

    pub fn spf(&self) -> &SpfEngine {
        &self.spf
    }

    fn q(&self) -> u64 {
        self.spf.ctx().p
    }

    /// Whether f̄_γ has a singular point in (F_p^×)^n, for every face and Γ(f).
    pub fn check_nondegenerate_mod_p(&self) -> Result<Vec<FaceVerdict>> {
        let ctx = self.spf.ctx();
        let mut out = Vec::new();
        let whole = singular_locus_mod(&self.f.reduce_mod_p(ctx.p), &ResidueDomain::Torus, ctx)?;
        out.push(FaceVerdict {
            face: None,
            torus_singular_points: whole.len(),
        });
        for (i, face) in self.poly.faces.iter().enumerate() {
            let fg = restrict_to_face(&self.f, face).reduce_mod_p(ctx.p);
            let sing = singular_locus_mod(&fg, &ResidueDomain::Torus, ctx)?;
            out.push(FaceVerdict {
                face: Some(i),
                torus_singular_points: sing.len(),
            });
        }
        Ok(out)
    }

    /// q^{-|k|} t^{m(k)}.
    fn weight(&self, k: &[u64]) -> Zeta {
        let abs: u64 = k.iter().sum();
        let m = self.poly.m_of(k);
        Zeta::monomial(self.q(), Cyclo::rational(q_pow_neg(self.q(), abs as u32)), m as usize)
    }

    /// Σ_{h∈H} q^{-|h|} t^{m(h)} / Π_j (1 - q^{-|a_j|} t^{m(a_j)}).
    pub fn series_factor(&self, cone: &OpenCone, h: &[Vec<u64>]) -> Zeta {
        let mut num = Zeta::zero(self.q());
        for pt in h {
            num = num.add(&self.weight(pt)).unwrap();
        }
        num.mul(&self.geometric_denominator(&cone.generators)).unwrap()
    }

    fn geometric_denominator(&self, gens: &[Vec<u64>]) -> Zeta {
        let mut den = Denominator::new();
        for g in gens {
            let abs: u64 = g.iter().sum();
            *den.entry(DenFactor::new(abs, self.poly.m_of(g))).or_insert(0) += 1;
        }
        Zeta::from_parts(self.q(), vec![Cyclo::one()], den)
    }

    /// Mode A: torus factor of f_γ times the lattice series of Δ.
    pub fn zeta_cone_mode_a(&self, face: usize, cone: &OpenCone) -> Result<ConeContribution> {
        let fg = restrict_to_face(&self.f, &self.poly.faces[face]);
        let h = parallelepiped_points(cone)?;
        let torus_factor = self.spf.torus_zeta(&fg)?;
        let series_factor = self.series_factor(cone, &h);
        let value = torus_factor.mul(&series_factor)?.normalize();
        Ok(ConeContribution {
            face,
            cone: cone.clone(),
            h,
            torus_factor,
            series_factor,
            value,
        })
    }

    /// Mode B: the stabilized recursion over shifted sub-cones.
    pub fn zeta_cone_mode_b(&self, face: usize, cone: &OpenCone) -> Result<ConeContribution> {
        let fg = restrict_to_face(&self.f, &self.poly.faces[face]);
        let h = parallelepiped_points(cone)?;
        let all: Vec<usize> = (0..cone.generators.len()).collect();
        let mut value = Zeta::zero(self.q());
        for pt in &h {
            value = value.add(&self.shifted(&cone.generators, pt, &all)?)?;
        }
        let torus_factor = self.spf.torus_zeta(&fg)?;
        let series_factor = self.series_factor(cone, &h);
        Ok(ConeContribution {
            face,
            cone: cone.clone(),
            h,
            torus_factor,
            series_factor,
            value: value.normalize(),
        })
    }

    fn stability(&self, g: &IntPolynomial) -> Result<u32> {
        if let Some(&c) = self.stab.read().unwrap().get(g) {
            return Ok(c);
        }
        let c = stability_exponent(g, &ResidueDomain::Torus, self.spf.ctx())?;
        self.stab.write().unwrap().insert(g.clone(), c);
        Ok(c)
    }

    /// Σ over c ∈ N^J of w(b + Σ c_j a_j) Z(O^{×n}, f_{b + Σ c_j a_j}).
    fn shifted(&self, gens: &[Vec<u64>], b: &[u64], j: &[usize]) -> Result<Zeta> {
        let q = self.q();
        let (fb, _) = self.f.monomial_dilation(b, q);
        if j.is_empty() {
            return self.weight(b).mul(&self.spf.torus_zeta(&fb)?);
        }
        // Terms on the face cut out by the generators in J.
        let on_face = |l: &[u64]| {
            j.iter().all(|&i| {
                let a = &gens[i];
                let v: u64 = a.iter().zip(l).map(|(x, y)| x * y).sum();
                v == self.poly.m_of(a)
            })
        };
        let g = fb.restrict(|e| {
            let l: Vec<u64> = e.0.iter().map(|&x| x as u64).collect();
            on_face(&l)
        });
        let conductor = self.spf.character().conductor();
        let m0 = (self.stability(&g)? + 1).max(conductor) as u64;
        let mut total = Zeta::zero(q);
        for mask in 0u32..(1 << j.len()) {
            let big_i: Vec<usize> = (0..j.len()).filter(|&k| mask >> k & 1 == 1).map(|k| j[k]).collect();
            let rest: Vec<usize> = j.iter().copied().filter(|x| !big_i.contains(x)).collect();
            let mut base = b.to_vec();
            for &i in &big_i {
                for (x, a) in base.iter_mut().zip(&gens[i]) {
                    *x += m0 * a;
                }
            }
            // Odometer over r ∈ [0, m0)^{rest}.
            let mut r = vec![0u64; rest.len()];
            loop {
                let mut bp = base.clone();
                for (k, &i) in rest.iter().enumerate() {
                    for (x, a) in bp.iter_mut().zip(&gens[i]) {
                        *x += r[k] * a;
                    }
                }
                let part = if big_i.len() == j.len() {
                    let sel: Vec<Vec<u64>> = j.iter().map(|&i| gens[i].clone()).collect();
                    self.weight(&bp)
                        .mul(&self.spf.torus_zeta(&g)?)?
                        .mul(&self.geometric_denominator(&sel))?
                } else {
                    self.shifted(gens, &bp, &big_i)?
                };
                total = total.add(&part)?;
                let mut k = 0;
                loop {
                    if k == r.len() {
                        break;
                    }
                    r[k] += 1;
                    if r[k] < m0 {
                        break;
                    }
                    r[k] = 0;
                    k += 1;
                }
                if k == r.len() {
                    break;
                }
            }
        }
        Ok(total)
    }

    /// All (face, simplicial sub-cone) pairs of the fan, in face order.
    pub fn simplicial_pieces(&self) -> Vec<(usize, OpenCone)> {
        let mut out = Vec::new();
        for (i, face) in self.poly.faces.iter().enumerate() {
            for c in triangulate_open_cone(&face.cone()) {
                out.push((i, c));
            }
        }
        out
    }

    pub fn zeta_full(&self, mode: ModeRequest) -> Result<ZetaResult> {
        let gate = self.check_nondegenerate_mod_p()?;
        let gate_ok = gate.iter().all(FaceVerdict::nondegenerate)
            && self.spf.character().conductor() == 1;
        let mode = match mode {
            ModeRequest::Auto => {
                if gate_ok {
                    EngineMode::A
                } else {
                    EngineMode::B
                }
            }
            ModeRequest::A => {
                if !gate_ok {
                    return Err(IgusaError::Engine(
                        "mode A requested but f is degenerate mod p on some face (or conductor > 1)"
                            .into(),
                    ));
                }
                EngineMode::A
            }
            ModeRequest::B => EngineMode::B,
        };
        let torus_term = self.spf.torus_zeta(&self.f)?;
        let pieces = self.simplicial_pieces();
        let cones: Vec<ConeContribution> = pieces
            .par_iter()
            .map(|(face, cone)| match mode {
                EngineMode::A => self.zeta_cone_mode_a(*face, cone),
                EngineMode::B => self.zeta_cone_mode_b(*face, cone),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut total = torus_term.clone();
        for c in &cones {
            total = total.add(&c.value)?;
        }
        Ok(ZetaResult {
            mode,
            gate,
            torus_term,
            cones,
            total: total.normalize(),
        })
    }
}

/// Face of the polyhedron whose cone contains `k` (helper for reports).
pub fn face_of_weight<'a>(poly: &'a NewtonPolyhedron, k: &[u64]) -> Option<&'a Face> {
    poly.first_meet_locus(k)
}
