//! Igusa's stationary phase formula: residue data ν and σ, descendants,
//! the recursion over descendant towers, and the indices L(f,P), C(f,D).

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{IgusaError, Result};
use crate::padic::{Character, PAdicContext};
use crate::poly::{FpPolynomial, IntPolynomial, ModEvaluator};
use crate::ratfun::{DenFactor, Denominator, FactoredRatFun};
use crate::scalar::{q_pow_neg, valuation, Coeff, Cyclo, Rational};

pub type Zeta = FactoredRatFun<Cyclo>;

/// A subset D̄ of F_p^n; D is its preimage in Z_p^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidueDomain {
    Full,
    Torus,
    Explicit(Vec<Vec<u64>>),
}

impl ResidueDomain {
    pub fn contains(&self, pt: &[u64]) -> bool {
        match self {
            ResidueDomain::Full => true,
            ResidueDomain::Torus => pt.iter().all(|&x| x != 0),
            ResidueDomain::Explicit(v) => v.iter().any(|q| q.as_slice() == pt),
        }
    }

    /// Calls `visit` on every residue point of D̄ in lexicographic order.
    pub fn for_each_point(&self, n: usize, p: u64, mut visit: impl FnMut(&[u64])) {
        match self {
            ResidueDomain::Explicit(v) => {
                let mut pts = v.clone();
                pts.sort();
                pts.dedup();
                for pt in &pts {
                    visit(pt);
                }
            }
            _ => {
                let lo = u64::from(*self == ResidueDomain::Torus);
                if lo >= p {
                    return;
                }
                let mut x = vec![lo; n];
                loop {
                    visit(&x);
                    let mut i = 0;
                    loop {
                        if i == n {
                            return;
                        }
                        x[i] += 1;
                        if x[i] < p {
                            break;
                        }
                        x[i] = lo;
                        i += 1;
                    }
                }
            }
        }
    }

    fn size(&self, n: usize, p: u64) -> u128 {
        match self {
            ResidueDomain::Full => (p as u128).pow(n as u32),
            ResidueDomain::Torus => ((p - 1) as u128).pow(n as u32),
            ResidueDomain::Explicit(v) => v.len() as u128,
        }
    }
}

fn check_scan(ctx: &PAdicContext, size: u128, module: &'static str) -> Result<()> {
    if size > ctx.enum_cap as u128 {
        return Err(IgusaError::CapExceeded {
            module,
            needed: size,
            cap: ctx.enum_cap,
        });
    }
    Ok(())
}

/// One pass over D̄ classifying points of V_{f̄}.
struct Scan {
    nonzero: u64,
    smooth_zero: u64,
    singular: Vec<Vec<u64>>,
}

fn scan(fbar: &FpPolynomial, d: &ResidueDomain, ctx: &PAdicContext) -> Result<Scan> {
    let n = fbar.nvars();
    check_scan(ctx, d.size(n, ctx.p), "spf")?;
    let partials = fbar.partials();
    let mut s = Scan {
        nonzero: 0,
        smooth_zero: 0,
        singular: Vec::new(),
    };
    d.for_each_point(n, ctx.p, |x| {
        if fbar.eval(x) != 0 {
            s.nonzero += 1;
        } else if partials.iter().any(|g| g.eval(x) != 0) {
            s.smooth_zero += 1;
        } else {
            s.singular.push(x.to_vec());
        }
    });
    Ok(s)
}

/// Points of D̄ where f̄ and all its partials vanish.
pub fn singular_locus_mod(
    fbar: &FpPolynomial,
    d: &ResidueDomain,
    ctx: &PAdicContext,
) -> Result<Vec<Vec<u64>>> {
    Ok(scan(fbar, d, ctx)?.singular)
}

/// Number of zeros of f̄ in D̄.
pub fn count_zeros_in(fbar: &FpPolynomial, d: &ResidueDomain, ctx: &PAdicContext) -> Result<u64> {
    let s = scan(fbar, d, ctx)?;
    Ok(s.smooth_zero + s.singular.len() as u64)
}

fn nu_from_scan(
    f: &IntPolynomial,
    d: &ResidueDomain,
    chi: &Character,
    ctx: &PAdicContext,
    s: &Scan,
) -> Result<Cyclo> {
    let n = f.nvars() as u32;
    let p = ctx.p;
    if chi.is_trivial() {
        return Ok(Cyclo::rational(
            Rational::from_integer(BigInt::from(s.nonzero)) * q_pow_neg(p, n),
        ));
    }
    let c = chi.conductor();
    let modulus = chi.modulus();
    let needed = d.size(f.nvars(), p) * (p as u128).pow(n * (c - 1));
    check_scan(ctx, needed, "spf")?;
    let ev = ModEvaluator::new(f, modulus);
    let fbar = f.reduce_mod_p(p);
    // Sum exponents of ζ_d, then assemble once.
    let mut counts = vec![0u64; chi.order() as usize];
    let mut lift = vec![0u64; f.nvars()];
    let levels = (p as u128).pow(n * (c - 1)) as u64;
    d.for_each_point(f.nvars(), p, |x| {
        if fbar.eval(x) == 0 {
            return;
        }
        for idx in 0..levels {
            let mut r = idx;
            for (i, xi) in x.iter().enumerate() {
                let hi = r % (modulus / p);
                r /= modulus / p;
                lift[i] = xi + p * hi;
            }
            let v = ev.eval(&lift);
            counts[chi.exponent(v).unwrap() as usize] += 1;
        }
    });
    let mut total = Cyclo::zero();
    for (k, &cnt) in counts.iter().enumerate() {
        if cnt > 0 {
            total = total
                + Cyclo::root_power(chi.order(), k as u64)
                    .scale(&Rational::from_integer(BigInt::from(cnt)));
        }
    }
    Ok(total.scale(&q_pow_neg(p, n * c)))
}

/// ν(f̄, D, χ).
pub fn nu(f: &IntPolynomial, d: &ResidueDomain, chi: &Character, ctx: &PAdicContext) -> Result<Cyclo> {
    let s = scan(&f.reduce_mod_p(ctx.p), d, ctx)?;
    nu_from_scan(f, d, chi, ctx, &s)
}

/// σ(f̄, D, χ): the smooth-zero density, zero for nontrivial χ.
pub fn sigma(
    f: &IntPolynomial,
    d: &ResidueDomain,
    chi: &Character,
    ctx: &PAdicContext,
) -> Result<Rational> {
    if !chi.is_trivial() {
        return Ok(Rational::zero());
    }
    let s = scan(&f.reduce_mod_p(ctx.p), d, ctx)?;
    Ok(Rational::from_integer(BigInt::from(s.smooth_zero)) * q_pow_neg(ctx.p, f.nvars() as u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Descendant {
    pub point: Vec<u64>,
    pub e: u32,
    pub poly: IntPolynomial,
}

#[derive(Clone, Debug)]
pub struct SpfStep {
    pub nu: Cyclo,
    pub sigma: Rational,
    pub descendants: Vec<Descendant>,
}

/// One application of the stationary phase formula on D.
pub fn spf_step(
    f: &IntPolynomial,
    d: &ResidueDomain,
    chi: &Character,
    ctx: &PAdicContext,
) -> Result<SpfStep> {
    if f.is_zero() {
        return Err(IgusaError::ZeroPolynomial { context: "spf_step" });
    }
    let s = scan(&f.reduce_mod_p(ctx.p), d, ctx)?;
    let nu = nu_from_scan(f, d, chi, ctx, &s)?;
    let sigma = if chi.is_trivial() {
        Rational::from_integer(BigInt::from(s.smooth_zero)) * q_pow_neg(ctx.p, f.nvars() as u32)
    } else {
        Rational::zero()
    };
    let descendants = s
        .singular
        .iter()
        .map(|pt| {
            let big: Vec<BigInt> = pt.iter().map(|&x| BigInt::from(x)).collect();
            let (poly, e) = f.dilate(&big, ctx.p)?;
            Ok(Descendant {
                point: pt.clone(),
                e,
                poly,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpfStep {
        nu,
        sigma,
        descendants,
    })
}

/// The smooth-zero term (1 - q^{-1}) t / (1 - q^{-1} t).
pub fn smooth_series(q: u64) -> Zeta {
    let mut den = Denominator::new();
    den.insert(DenFactor::new(1, 1), 1);
    let c = Rational::one() - q_pow_neg(q, 1);
    FactoredRatFun::from_parts(q, vec![Cyclo::zero(), Cyclo::rational(c)], den)
}

/// L(f,P): minimum valuation of f and its partials at P; `None` if all vanish.
pub fn l_index(f: &IntPolynomial, point: &[BigInt], p: u64) -> Option<u32> {
    std::iter::once(f.eval(point))
        .chain(f.partials().iter().map(|g| g.eval(point)))
        .filter_map(|v| valuation(&v, p))
        .min()
}

/// C(f,D) = max of L(f,P) over P ∈ D, by refinement of residue classes.
pub fn stability_exponent(f: &IntPolynomial, d: &ResidueDomain, ctx: &PAdicContext) -> Result<u32> {
    let p = ctx.p;
    let n = f.nvars();
    let partials = f.partials();
    let fbar = f.reduce_mod_p(p);
    let pbar: Vec<FpPolynomial> = partials.iter().map(|g| g.reduce_mod_p(p)).collect();
    check_scan(ctx, d.size(n, p), "spf")?;
    let mut level: Vec<Vec<u64>> = Vec::new();
    d.for_each_point(n, p, |x| {
        if fbar.eval(x) == 0 && pbar.iter().all(|g| g.eval(x) == 0) {
            level.push(x.to_vec());
        }
    });
    let mut k: u32 = 0;
    let mut modulus: u64 = 1;
    let pn = (p as u128).pow(n as u32) as u64;
    while !level.is_empty() {
        k += 1;
        modulus *= p;
        if k as usize > ctx.m_cap || (modulus as u128) * (p as u128) >= 1u128 << 62 {
            return Err(IgusaError::SpfDepthExceeded(ctx.m_cap));
        }
        // Lift each class mod p^k to classes mod p^{k+1}.
        let next_mod = modulus * p;
        let ev: Vec<ModEvaluator> = std::iter::once(f)
            .chain(partials.iter())
            .map(|g| ModEvaluator::new(g, next_mod))
            .collect();
        check_scan(ctx, level.len() as u128 * pn as u128, "spf")?;
        let mut next = Vec::new();
        let mut y = vec![0u64; n];
        for base in &level {
            for idx in 0..pn {
                let mut r = idx;
                for i in 0..n {
                    y[i] = base[i] + modulus * (r % p);
                    r /= p;
                }
                if ev.iter().all(|e| e.eval(&y) == 0) {
                    next.push(y.clone());
                }
            }
        }
        level = next;
    }
    Ok(k)
}

/// A node of the descendant tree: f_{P_1,…,P_k} with its tower data.
#[derive(Clone, Debug)]
pub struct SpfNode {
    pub tower: Vec<Vec<u64>>,
    pub exponents: Vec<u32>,
    pub total: u32,
    pub current: IntPolynomial,
    pub has_descendants: bool,
}

impl SpfNode {
    /// P_1 + p P_2 + … + p^{k-1} P_k.
    pub fn point(&self, p: u64) -> Vec<BigInt> {
        let n = self.current.nvars();
        let mut out = vec![BigInt::zero(); n];
        let mut pw = BigInt::one();
        for pt in &self.tower {
            for i in 0..n {
                out[i] += &pw * BigInt::from(pt[i]);
            }
            pw *= BigInt::from(p);
        }
        out
    }
}

/// Breadth-first expansion of all descendant towers of (f, D) up to `max_depth`.
pub fn expand_towers(
    f: &IntPolynomial,
    d: &ResidueDomain,
    ctx: &PAdicContext,
    max_depth: usize,
) -> Result<Vec<SpfNode>> {
    let chi = Character::trivial(ctx.p);
    let mut out = Vec::new();
    let root = spf_step(f, d, &chi, ctx)?;
    let mut frontier: Vec<SpfNode> = root
        .descendants
        .into_iter()
        .map(|dsc| SpfNode {
            tower: vec![dsc.point],
            exponents: vec![dsc.e],
            total: dsc.e,
            current: dsc.poly,
            has_descendants: false,
        })
        .collect();
    for _ in 0..max_depth {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for mut node in frontier {
            let step = spf_step(&node.current, &ResidueDomain::Full, &chi, ctx)?;
            node.has_descendants = !step.descendants.is_empty();
            for dsc in step.descendants {
                let mut t = node.tower.clone();
                t.push(dsc.point);
                let mut e = node.exponents.clone();
                e.push(dsc.e);
                next.push(SpfNode {
                    tower: t,
                    total: node.total + dsc.e,
                    exponents: e,
                    current: dsc.poly,
                    has_descendants: false,
                });
            }
            out.push(node);
        }
        frontier = next;
    }
    out.extend(frontier);
    Ok(out)
}

type MemoKey = (IntPolynomial, ResidueDomain);

/// Evaluates Z(D, s, f, χ) through the SPF recursion with memoization.
pub struct SpfEngine {
    ctx: PAdicContext,
    chi: Character,
    memo: RwLock<HashMap<MemoKey, Zeta>>,
}

const MAX_NODES: usize = 200_000;

impl SpfEngine {
    pub fn new(ctx: PAdicContext, chi: Character) -> Self {
        SpfEngine {
            ctx,
            chi,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    /// Z(O^{×n}, s, f, χ).
    pub fn torus_zeta(&self, f: &IntPolynomial) -> Result<Zeta> {
        self.zeta(f, &ResidueDomain::Torus)
    }

    /// Z(D, s, f, χ) as an exact rational function of t.
    pub fn zeta(&self, f: &IntPolynomial, d: &ResidueDomain) -> Result<Zeta> {
        let q = self.ctx.p;
        let Some(v) = f.content_valuation(q) else {
            return Err(IgusaError::ZeroPolynomial { context: "zeta" });
        };
        let g = f.divide_by_p_power(q, v);
        let key = (g, d.clone());
        if let Some(z) = self.memo.read().unwrap().get(&key) {
            return Ok(z.shift(v as usize));
        }
        let z = self.solve(key)?;
        Ok(z.shift(v as usize))
    }

    fn solve(&self, root: MemoKey) -> Result<Zeta> {
        let q = self.ctx.p;
        let n = root.0.nvars() as u32;
        let mut keys: Vec<MemoKey> = vec![root.clone()];
        let mut index: HashMap<MemoKey, usize> = HashMap::new();
        index.insert(root, 0);
        let mut local: Vec<Option<Zeta>> = vec![None];
        let mut known: Vec<Option<Zeta>> = vec![None];
        let mut edges: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
        let mut depth: Vec<usize> = vec![0];
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if let Some(z) = self.memo.read().unwrap().get(&keys[i]) {
                known[i] = Some(z.clone());
                continue;
            }
            if depth[i] > self.ctx.m_cap || keys.len() > MAX_NODES {
                return Err(IgusaError::SpfDepthExceeded(self.ctx.m_cap));
            }
            let step = spf_step(&keys[i].0, &keys[i].1, &self.chi, &self.ctx)?;
            let mut lv = Zeta::constant(q, step.nu);
            if !step.sigma.is_zero() {
                lv = lv.add(&smooth_series(q).scale(&Cyclo::rational(step.sigma)))?;
            }
            local[i] = Some(lv);
            for dsc in step.descendants {
                let key = (dsc.poly, ResidueDomain::Full);
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = keys.len();
                        keys.push(key.clone());
                        index.insert(key, j);
                        local.push(None);
                        known.push(None);
                        edges.push(Vec::new());
                        depth.push(depth[i] + 1);
                        queue.push_back(j);
                        j
                    }
                };
                edges[i].push((j, dsc.e));
            }
        }

        let mut graph = DiGraph::<usize, u32>::new();
        let nodes: Vec<NodeIndex> = (0..keys.len()).map(|i| graph.add_node(i)).collect();
        for (i, es) in edges.iter().enumerate() {
            for &(j, e) in es {
                graph.add_edge(nodes[i], nodes[j], e);
            }
        }
        let weight = |e: u32| Zeta::monomial(q, Cyclo::rational(q_pow_neg(q, n)), e as usize);
        let mut value: Vec<Option<Zeta>> = known;
        for comp in tarjan_scc(&graph) {
            let members: Vec<usize> = comp.iter().map(|ix| graph[*ix]).collect();
            if members.iter().all(|&i| value[i].is_some()) {
                continue;
            }
            let inside = |j: usize| members.contains(&j);
            // A_i = local_i + Σ over edges leaving the component.
            let mut a: HashMap<usize, Zeta> = HashMap::new();
            for &i in &members {
                let mut acc = local[i].clone().expect("expanded node");
                for &(j, e) in &edges[i] {
                    if !inside(j) {
                        let zj = value[j].as_ref().expect("solved in topological order");
                        acc = acc.add(&weight(e).mul(zj)?)?;
                    }
                }
                a.insert(i, acc);
            }
            let internal: HashMap<usize, Vec<(usize, u32)>> = members
                .iter()
                .map(|&i| (i, edges[i].iter().copied().filter(|(j, _)| inside(*j)).collect()))
                .collect();
            if members.len() == 1 && internal[&members[0]].is_empty() {
                let i = members[0];
                value[i] = a.remove(&i);
                continue;
            }
            // Each member needs its internal edges to be k parallel copies of one edge.
            let simple = internal
                .values()
                .all(|v| !v.is_empty() && v.iter().all(|edge| *edge == v[0]));
            if !simple {
                return Err(IgusaError::UnsupportedRecursion(format!(
                    "descendant graph component of size {} is not a simple cycle",
                    members.len()
                )));
            }
            let mult = |i: usize| internal[&i].len() as u64;
            // Walk the cycle from the first member.
            let start = members[0];
            let mut cycle = vec![start];
            let mut ws = Vec::new();
            let mut cur = start;
            loop {
                let (j, e) = internal[&cur][0];
                ws.push(e);
                if j == start {
                    break;
                }
                cycle.push(j);
                cur = j;
            }
            if cycle.len() != members.len() {
                return Err(IgusaError::UnsupportedRecursion(
                    "descendant graph component is not a single cycle".into(),
                ));
            }
            // Cycle weight Π k_i q^{-n} t^{e_i} = q^{-N} t^M needs Π k_i to be a power of q.
            let k_total: u64 = cycle.iter().map(|&i| mult(i)).product();
            let mut j = 0u64;
            let mut rest = k_total;
            while rest.is_multiple_of(q) {
                rest /= q;
                j += 1;
            }
            let len = cycle.len() as u64;
            if rest != 1 || j > n as u64 * len {
                return Err(IgusaError::UnsupportedRecursion(format!(
                    "cycle multiplicity {k_total} is not a power of q"
                )));
            }
            let big_m: u64 = ws.iter().map(|&e| e as u64).sum();
            let mut den = Denominator::new();
            den.insert(DenFactor::new(n as u64 * len - j, big_m), 1);
            let inv = Zeta::from_parts(q, vec![Cyclo::one()], den);
            let edge = |i: usize, e: u32| {
                weight(e).scale(&Cyclo::rational(Rational::from_integer(mult(i).into())))
            };
            // Z(c_0) = (A_0 + w_0 A_1 + w_0 w_1 A_2 + …) / (1 - Π w).
            let mut acc = Zeta::zero(q);
            let mut pref = Zeta::one(q);
            for (k, &node) in cycle.iter().enumerate() {
                acc = acc.add(&pref.mul(&a[&node])?)?;
                pref = pref.mul(&edge(node, ws[k]))?;
            }
            let z0 = acc.mul(&inv)?.normalize();
            // Backwards around the cycle: Z(c_k) = A_k + w_k Z(c_{k+1}).
            let mut next = z0.clone();
            for k in (1..cycle.len()).rev() {
                let zk = a[&cycle[k]].add(&edge(cycle[k], ws[k]).mul(&next)?)?.normalize();
                value[cycle[k]] = Some(zk.clone());
                next = zk;
            }
            value[start] = Some(z0);
        }
        let mut memo = self.memo.write().unwrap();
        for (i, v) in value.iter().enumerate() {
            if let Some(z) = v {
                memo.entry(keys[i].clone()).or_insert_with(|| z.normalize());
            }
        }
        Ok(memo[&keys[0]].clone())
    }
}

/// Converts a character-free zeta value to rational coefficients.
pub fn to_rational(z: &Zeta) -> Option<FactoredRatFun<Rational>> {
    let mut out = FactoredRatFun::zero(z.q());
    for t in z.terms() {
        let num: Option<Vec<Rational>> = t.num.iter().map(|c| c.as_rational()).collect();
        out = out
            .add(&FactoredRatFun::from_parts(z.q(), num?, t.den.clone()))
            .ok()?;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{infer_variables, parse_polynomial};
    use crate::scalar::{int, rat};

    fn poly(s: &str) -> IntPolynomial {
        parse_polynomial(s, &infer_variables(s)).unwrap()
    }

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::new(p).unwrap()
    }

    #[test]
    fn parallel_self_loops() {
        // p residues on x + y = 0 each dilate back to (x+y)^2: weight p·q^{-2}t^2.
        for p in [2, 3, 5] {
            let eng = SpfEngine::new(ctx(p), Character::trivial(p));
            let z = eng.zeta(&poly("x^2+2*x*y+y^2"), &ResidueDomain::Full).unwrap();
            let q = p as i64;
            let mut den = Denominator::new();
            den.insert(DenFactor::new(1, 2), 1);
            let want = Zeta::from_parts(p, vec![Cyclo::rational(rat(q - 1, q))], den);
            assert!(z.equals(&want), "p = {p}: {}", z.normalized_json());
        }
    }

    #[test]
    fn singular_loci() {
        let f = poly("x^2+x*y+y^2");
        let c = ctx(7);
        assert_eq!(
            singular_locus_mod(&f.reduce_mod_p(7), &ResidueDomain::Full, &c).unwrap(),
            vec![vec![0, 0]]
        );
        assert!(singular_locus_mod(&f.reduce_mod_p(7), &ResidueDomain::Torus, &c)
            .unwrap()
            .is_empty());
        let g = poly("x*y");
        assert_eq!(
            singular_locus_mod(&g.reduce_mod_p(5), &ResidueDomain::Full, &ctx(5)).unwrap(),
            vec![vec![0, 0]]
        );
    }

    #[test]
    fn nu_sigma_examples() {
        let f = poly("x^2+x*y+y^2");
        let t7 = Character::trivial(7);
        assert_eq!(
            nu(&f, &ResidueDomain::Torus, &t7, &ctx(7)).unwrap(),
            Cyclo::rational(rat(24, 49))
        );
        assert_eq!(sigma(&f, &ResidueDomain::Torus, &t7, &ctx(7)).unwrap(), rat(12, 49));
        assert_eq!(
            sigma(&f, &ResidueDomain::Torus, &Character::trivial(5), &ctx(5)).unwrap(),
            int(0)
        );
        let x = poly("x");
        assert_eq!(
            nu(&x, &ResidueDomain::Full, &Character::trivial(3), &ctx(3)).unwrap(),
            Cyclo::rational(rat(2, 3))
        );
        let chi = Character::new(5, 2, 1).unwrap();
        assert_eq!(
            nu(&poly("x^2"), &ResidueDomain::Torus, &chi, &ctx(5)).unwrap(),
            Cyclo::rational(rat(4, 5))
        );
        assert_eq!(sigma(&f, &ResidueDomain::Full, &chi, &ctx(5)).unwrap(), int(0));
    }

    #[test]
    fn spf_step_examples() {
        let f = poly("x^2+x*y+y^2");
        let t = Character::trivial(7);
        let s = spf_step(&f, &ResidueDomain::Full, &t, &ctx(7)).unwrap();
        assert_eq!(s.descendants.len(), 1);
        assert_eq!(s.descendants[0].point, vec![0, 0]);
        assert_eq!(s.descendants[0].e, 2);
        assert_eq!(s.descendants[0].poly, f);
        let s = spf_step(&f, &ResidueDomain::Torus, &t, &ctx(7)).unwrap();
        assert!(s.descendants.is_empty());
        // f = x: the zero is smooth, so it is absorbed by σ rather than a descendant.
        let s = spf_step(&poly("x"), &ResidueDomain::Full, &Character::trivial(3), &ctx(3)).unwrap();
        assert!(s.descendants.is_empty());
        assert_eq!(s.sigma, rat(1, 3));
    }

    #[test]
    fn torus_zeta_examples() {
        let f = poly("x^2+x*y+y^2");
        let eng = SpfEngine::new(ctx(7), Character::trivial(7));
        let z = eng.torus_zeta(&f).unwrap();
        let expect = Zeta::constant(7, Cyclo::rational(rat(24, 49)))
            .add(&smooth_series(7).scale(&Cyclo::rational(rat(12, 49))))
            .unwrap();
        assert!(z.equals(&expect));

        let x = poly("x");
        let eng3 = SpfEngine::new(ctx(3), Character::trivial(3));
        assert!(eng3
            .torus_zeta(&x)
            .unwrap()
            .equals(&Zeta::constant(3, Cyclo::rational(rat(2, 3)))));
        // Full line: Z(x) = (1 - q^{-1}) / (1 - q^{-1} t); the smooth-zero
        // view and the self-descendant view agree.
        let full = eng3.zeta(&x, &ResidueDomain::Full).unwrap();
        let mut den = Denominator::new();
        den.insert(DenFactor::new(1, 1), 1);
        let expect = Zeta::from_parts(3, vec![Cyclo::rational(rat(2, 3))], den);
        assert!(full.equals(&expect));

        // Self-similar recursion on the full plane.
        let zf = eng.zeta(&f, &ResidueDomain::Full).unwrap();
        let s = eng.spf_root_data(&f);
        let mut den = Denominator::new();
        den.insert(DenFactor::new(2, 2), 1);
        let expect = s.mul(&Zeta::from_parts(7, vec![Cyclo::one()], den)).unwrap();
        assert!(zf.equals(&expect));
    }

    impl SpfEngine {
        fn spf_root_data(&self, f: &IntPolynomial) -> Zeta {
            let s = spf_step(f, &ResidueDomain::Full, &self.chi, &self.ctx).unwrap();
            Zeta::constant(self.ctx.p, s.nu)
                .add(&smooth_series(self.ctx.p).scale(&Cyclo::rational(s.sigma)))
                .unwrap()
        }
    }

    #[test]
    fn l_index_examples() {
        let f = poly("x^2+x*y+y^2");
        let one = BigInt::one();
        let zero = BigInt::zero();
        assert_eq!(l_index(&f, &[one.clone(), one.clone()], 7), Some(0));
        assert_eq!(l_index(&f, &[zero.clone(), zero.clone()], 7), None);
        assert_eq!(l_index(&poly("x^2-7"), &[zero], 7), Some(1));
    }

    #[test]
    fn stability_examples() {
        let f = poly("x^2+x*y+y^2");
        assert_eq!(stability_exponent(&f, &ResidueDomain::Torus, &ctx(7)).unwrap(), 0);
        assert_eq!(stability_exponent(&f, &ResidueDomain::Torus, &ctx(5)).unwrap(), 0);
        assert_eq!(stability_exponent(&poly("x^2-7"), &ResidueDomain::Full, &ctx(7)).unwrap(), 1);
        // Origin is singular: refinement never stops.
        assert!(matches!(
            stability_exponent(&f, &ResidueDomain::Full, &PAdicContext::with_caps(7, 10_000_000, 6).unwrap()),
            Err(IgusaError::SpfDepthExceeded(6))
        ));
    }

    #[test]
    fn tower_exponents_accumulate() {
        let f = poly("x^2 - 343*y + 7*x*y^2");
        let c = ctx(7);
        for node in expand_towers(&f, &ResidueDomain::Full, &c, 4).unwrap() {
            if !node.has_descendants {
                continue;
            }
            let k = node.tower.len() as u32;
            let lhs = l_index(&node.current, &vec![BigInt::zero(); 2], 7).unwrap();
            let rhs = l_index(&f, &node.point(7), 7).unwrap();
            assert!(lhs + k <= rhs);
        }
    }

    #[test]
    fn non_isolated_singular_locus_closes_through_parallel_loops() {
        // (x - y)^2 is singular along the diagonal: each of the p - 1 torus
        // points (a, a) descends to (x - y)^2 on the full domain, whose p
        // diagonal points loop back to it.
        let f = poly("x^2 - 2*x*y + y^2");
        let eng = SpfEngine::new(PAdicContext::with_caps(5, 10_000_000, 5).unwrap(), Character::trivial(5));
        let z = eng.torus_zeta(&f).unwrap();
        let mut den = Denominator::new();
        den.insert(DenFactor::new(1, 2), 1);
        // (1 - 1/p)((1 - 1/p)/(1 - t^2/p) - 1/p): x = u + y must stay a unit.
        let num = [rat(12, 25), rat(0, 1), rat(4, 125)].map(Cyclo::rational).to_vec();
        let want = Zeta::from_parts(5, num, den);
        assert!(z.equals(&want), "{}", z.normalized_json());
        let oracle = crate::oracle::twisted_coeffs(
            &f,
            &Character::trivial(5),
            6,
            &crate::oracle::OracleDomain::Torus,
            10_000_000,
        )
        .unwrap();
        assert_eq!(z.series_expand(6), oracle);
    }
}
