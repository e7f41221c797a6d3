//! Run configuration and the JSON/text reports built from it.

use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::analysis::{
    beta_invariants, candidate_poles, char_vanishing, expsum_bound_report, poles_within_candidates,
    theorem_b_verdict,
};
use crate::engine::{ModeRequest, ZetaEngine, ZetaResult};
use crate::error::{IgusaError, Result};
use crate::newton::NewtonPolyhedron;
use crate::oracle::{compare_series, exp_sum, twisted_coeffs, OracleDomain};
use crate::padic::{Character, PAdicContext, DEFAULT_ENUM_CAP, DEFAULT_SPF_DEPTH};
use crate::poly::{infer_variables, parse_newton_polynomial, IntPolynomial};
use crate::ratfun::FactoredRatFun;
use crate::scalar::{fmt_rational, is_prime, Coeff, Rational};
use crate::spf::{to_rational, Zeta};

pub const DEFAULT_KMAX: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Checks {
    pub poles: bool,
    pub theorem_b: bool,
    pub oracle: bool,
    pub expsum: bool,
}

impl Checks {
    pub fn all() -> Self {
        Checks {
            poles: true,
            theorem_b: true,
            oracle: true,
            expsum: true,
        }
    }

    pub fn defaults() -> Self {
        Checks {
            expsum: false,
            ..Checks::all()
        }
    }

    /// Comma-separated list of poles|theoremB|oracle|expsum|all|none.
    pub fn parse(s: &str) -> Result<Self> {
        let mut c = Checks::default();
        for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "all" => c = Checks::all(),
                "none" => {}
                "poles" => c.poles = true,
                "theoremb" => c.theorem_b = true,
                "oracle" => c.oracle = true,
                "expsum" => c.expsum = true,
                _ => return Err(IgusaError::Config(format!("unknown check `{item}`"))),
            }
        }
        Ok(c)
    }

    fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.poles {
            v.push("poles");
        }
        if self.theorem_b {
            v.push("theoremB");
        }
        if self.oracle {
            v.push("oracle");
        }
        if self.expsum {
            v.push("expsum");
        }
        v
    }
}

/// One run of the engine; also the line format of corpus files.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub poly: String,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    pub p: u64,
    #[serde(default = "one")]
    pub char_order: u32,
    #[serde(default = "one")]
    pub char_conductor: u32,
    #[serde(default = "auto")]
    pub mode: String,
    /// Number of series coefficients compared against the oracle.
    #[serde(default = "kmax")]
    pub kmax: usize,
    #[serde(default = "spf_depth")]
    pub spf_depth: usize,
    #[serde(default = "enum_cap")]
    pub enum_cap: u64,
    #[serde(default)]
    pub checks: Option<String>,
}

fn one() -> u32 {
    1
}
fn auto() -> String {
    "auto".into()
}
fn kmax() -> usize {
    DEFAULT_KMAX
}
fn spf_depth() -> usize {
    DEFAULT_SPF_DEPTH
}
fn enum_cap() -> u64 {
    DEFAULT_ENUM_CAP
}

impl RunConfig {
    pub fn new(poly: &str, p: u64) -> Self {
        RunConfig {
            poly: poly.into(),
            vars: None,
            p,
            char_order: 1,
            char_conductor: 1,
            mode: auto(),
            kmax: DEFAULT_KMAX,
            spf_depth: DEFAULT_SPF_DEPTH,
            enum_cap: DEFAULT_ENUM_CAP,
            checks: None,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        self.vars.clone().unwrap_or_else(|| infer_variables(&self.poly))
    }

    pub fn polynomial(&self) -> Result<IntPolynomial> {
        parse_newton_polynomial(&self.poly, &self.variables())
    }

    pub fn checks(&self) -> Result<Checks> {
        match &self.checks {
            Some(s) => Checks::parse(s),
            None => Ok(Checks::defaults()),
        }
    }

    pub fn context(&self) -> Result<PAdicContext> {
        if !is_prime(self.p) {
            return Err(IgusaError::Config(format!("p = {} is not prime", self.p)));
        }
        if self.kmax == 0 {
            return Err(IgusaError::Config("kmax must be at least 1".into()));
        }
        PAdicContext::with_caps(self.p, self.enum_cap, self.spf_depth)
    }

    pub fn character(&self) -> Result<Character> {
        if self.char_order == 1 && self.char_conductor == 1 {
            Ok(Character::trivial(self.p))
        } else {
            Character::new(self.p, self.char_order, self.char_conductor)
        }
    }

    fn input_json(&self, f: &IntPolynomial, checks: &Checks) -> Value {
        let vars = self.variables();
        json!({
            "poly": f.display_with(&vars),
            "vars": vars,
            "p": self.p,
            "character": {"order": self.char_order, "conductor": self.char_conductor},
            "mode": self.mode,
            "kmax": self.kmax,
            "spf_depth": self.spf_depth,
            "enum_cap": self.enum_cap,
            "checks": checks.names(),
        })
    }
}

/// A finished report plus the names of the checks that failed.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub failures: Vec<String>,
}

pub fn newton_json(poly: &NewtonPolyhedron) -> Value {
    json!({
        "dimension": poly.n,
        "vertices": poly.vertices,
        "facets": poly.facets.iter().map(|f| json!({
            "normal": f.normal, "m": f.m, "abs": f.abs,
        })).collect::<Vec<_>>(),
        "faces": poly.faces.iter().enumerate().map(|(i, f)| json!({
            "index": i,
            "dim": f.dim,
            "compact": f.is_compact(),
            "points": f.points,
            "cone": f.cone_generators,
        })).collect::<Vec<_>>(),
    })
}

/// The Newton polyhedron report for `cfg.poly`.
pub fn run_newton(cfg: &RunConfig) -> Result<Report> {
    let f = cfg.polynomial()?;
    let poly = NewtonPolyhedron::new(&f)?;
    let vars = cfg.variables();
    let mut m = Map::new();
    m.insert("input".into(), json!({"poly": f.display_with(&vars), "vars": vars}));
    m.insert("newton".into(), newton_json(&poly));
    Ok(Report {
        json: Value::Object(m),
        failures: Vec::new(),
    })
}

fn zeta_json(res: &ZetaResult) -> Value {
    json!({
        "mode": format!("{:?}", res.mode),
        "gate": res.gate.iter().map(|v| json!({
            "face": v.face.map(|i| json!(i)).unwrap_or(json!("f")),
            "torus_singular_points": v.torus_singular_points,
        })).collect::<Vec<_>>(),
        "Z": res.total.normalized_json(),
        "text": format_ratfun(&res.total),
        "torus_term": res.torus_term.normalized_json(),
        "cones": res.cones.iter().map(|c| json!({
            "face": c.face,
            "generators": c.cone.generators,
            "H": c.h,
            "torus_factor": c.torus_factor.normalized_json(),
            "series_factor": c.series_factor.normalized_json(),
        })).collect::<Vec<_>>(),
    })
}

/// The full zeta report: engine, analysis and the requested checks.
pub fn run_zeta(cfg: &RunConfig) -> Result<Report> {
    let checks = cfg.checks()?;
    let f = cfg.polynomial()?;
    let ctx = cfg.context()?;
    let chi = cfg.character()?;
    let mode: ModeRequest = cfg.mode.parse()?;
    let engine = ZetaEngine::new(f.clone(), ctx.clone(), chi.clone())?;
    let poly = engine.polyhedron().clone();
    let res = engine.zeta_full(mode)?;
    let z_rat = to_rational(&res.total);
    let inv = beta_invariants(&poly);
    let mut failures = Vec::new();

    let mut out = Map::new();
    out.insert("input".into(), cfg.input_json(&f, &checks));
    out.insert("newton".into(), newton_json(&poly));
    out.insert("zeta".into(), zeta_json(&res));

    // Poles.
    let candidates: Vec<Value> = candidate_poles(&poly)
        .into_iter()
        .map(|(n, m)| {
            json!({"N": n, "M": m, "real_part": fmt_rational(&-Rational::new(n.into(), m.into()))})
        })
        .collect();
    let mut poles = Map::new();
    poles.insert("candidates".into(), json!(candidates));
    match &z_rat {
        Some(z) => {
            let fams = z.pole_families();
            poles.insert(
                "families".into(),
                json!(fams
                    .iter()
                    .map(|pf| json!({
                        "real_part": fmt_rational(&pf.real_part),
                        "N": pf.n,
                        "M": pf.m,
                        "multiplicity": pf.multiplicity,
                    }))
                    .collect::<Vec<_>>()),
            );
            if checks.poles {
                let ok = poles_within_candidates(z, &poly);
                poles.insert("within_candidates".into(), json!(ok));
                if !ok {
                    failures.push("poles: a pole lies outside the candidate set".into());
                }
            }
        }
        None => {
            let (_, den) = res.total.normalized_parts();
            poles.insert(
                "denominator".into(),
                json!(den.iter().map(|(f, k)| json!([f.n, f.m, k])).collect::<Vec<_>>()),
            );
        }
    }
    out.insert("poles".into(), Value::Object(poles));

    // Invariants.
    out.insert(
        "invariants".into(),
        match &inv {
            Ok(b) => b.to_json(&poly),
            Err(e) => json!({"error": e.to_string()}),
        },
    );

    // Theorem checks.
    let mut th = Map::new();
    if checks.theorem_b && chi.is_trivial() {
        if let (Some(z), Ok(b)) = (&z_rat, &inv) {
            let v = theorem_b_verdict(z, &f, &poly, &ctx)?;
            if v.passed() == Some(false) {
                failures.push(format!(
                    "theoremB: multiplicity {} at beta = {}, expected {}",
                    v.observed,
                    fmt_rational(&b.beta),
                    v.expected.unwrap()
                ));
            }
            th.insert("largest_pole".into(), v.to_json());
            if v.observed > 0 {
                let lim = z.limit_value(b.n, b.m, v.observed)?;
                th.insert(
                    "leading_coefficient".into(),
                    json!({"rho": v.observed, "limit": lim.to_json()}),
                );
            }
        }
    }
    if checks.poles && !chi.is_trivial() {
        let predicted = char_vanishing(chi.order(), &poly);
        let polynomial = res.total.is_polynomial();
        let (num, _) = res.total.normalized_parts();
        let status = match (predicted, polynomial) {
            (true, true) => "pass",
            (true, false) => "fail",
            (false, _) => "not predicted",
        };
        if status == "fail" {
            failures.push("character_vanishing: Z is not a polynomial".into());
        }
        th.insert(
            "character_vanishing".into(),
            json!({
                "order": chi.order(),
                "predicted": predicted,
                "polynomial": polynomial,
                "degree": polynomial.then(|| num.len().saturating_sub(1)),
                "status": status,
            }),
        );
    }
    out.insert("theorem_checks".into(), Value::Object(th));

    // Oracle.
    let mut or = Map::new();
    if checks.oracle {
        let prefix = twisted_coeffs(&f, &chi, cfg.kmax - 1, &OracleDomain::All, cfg.enum_cap)?;
        let cmp = compare_series(&res.total, &prefix);
        if let Some(k) = cmp.first_mismatch {
            failures.push(format!("oracle: series coefficient {k} differs"));
        }
        or.insert("series".into(), cmp.to_json());
    }
    if checks.expsum {
        or.insert("expsum".into(), expsum_json(&f, &poly, cfg, &mut failures)?);
    }
    out.insert("oracle".into(), Value::Object(or));

    Ok(Report {
        json: Value::Object(out),
        failures,
    })
}

fn expsum_json(
    f: &IntPolynomial,
    poly: &NewtonPolyhedron,
    cfg: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Value> {
    let n = f.nvars() as u32;
    let mut samples = Vec::new();
    let mut values = Vec::new();
    for m in 1..=4u32 {
        if cfg.p.checked_pow(n * m).is_none_or(|v| v > cfg.enum_cap) {
            break;
        }
        let (re, im) = exp_sum(f, cfg.p, m, 1, cfg.enum_cap)?;
        samples.push((m, re.hypot(im)));
        values.push(json!({"m": m, "E": complex_json(re, im)}));
    }
    Ok(match expsum_bound_report(poly, cfg.p, &samples) {
        Ok(rep) => {
            if !rep.holds() {
                failures.push("expsum: sampled |E| exceeds the fitted bound".into());
            }
            json!({"values": values, "bound": rep.to_json()})
        }
        Err(e) => json!({"values": values, "bound": {"status": "not applicable", "reason": e.to_string()}}),
    })
}

/// A rational coefficient as `"a/b"`, otherwise the cyclotomic form.
pub fn coeff_json<C: Coeff>(c: &C) -> Value {
    match c.as_rational() {
        Some(r) => json!(fmt_rational(&r)),
        None => c.to_json(),
    }
}

pub fn complex_json(re: f64, im: f64) -> Value {
    json!([format!("{re:.15}"), format!("{im:.15}")])
}

/// Human-readable form: numerator / Π (1 - q^-N t^M)^k.
pub fn format_ratfun<C: Coeff>(z: &FactoredRatFun<C>) -> String {
    let (num, den) = z.normalized_parts();
    let coeff = |c: &C| match c.as_rational() {
        Some(r) => fmt_rational(&r),
        None => c.to_json().to_string(),
    };
    let mut s = String::new();
    let terms: Vec<String> = num
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => coeff(c),
            1 => format!("({})*t", coeff(c)),
            _ => format!("({})*t^{k}", coeff(c)),
        })
        .collect();
    if terms.is_empty() {
        return "0".into();
    }
    let _ = write!(s, "{}", terms.join(" + "));
    let q = z.q();
    let factors: Vec<String> = den
        .iter()
        .map(|(f, k)| {
            let base = match f.m {
                0 => format!("(1 - {q}^-{})", f.n),
                1 => format!("(1 - {q}^-{}*t)", f.n),
                m => format!("(1 - {q}^-{}*t^{m})", f.n),
            };
            if *k > 1 {
                format!("{base}^{k}")
            } else {
                base
            }
        })
        .collect();
    if !factors.is_empty() {
        s = format!("({s}) / ({})", factors.join(" * "));
    }
    s
}

/// Indented text rendering of a zeta report.
pub fn render_text(report: &Value) -> String {
    let mut s = String::new();
    let get = |k: &str| report.get(k).cloned().unwrap_or(Value::Null);
    let input = get("input");
    let _ = writeln!(s, "f = {}  (p = {})", input["poly"].as_str().unwrap_or(""), input["p"]);
    let newton = get("newton");
    if let Some(facets) = newton["facets"].as_array() {
        let _ = writeln!(s, "facets:");
        for fc in facets {
            let _ = writeln!(s, "  normal {}  m = {}  |a| = {}", fc["normal"], fc["m"], fc["abs"]);
        }
    }
    let zeta = get("zeta");
    if !zeta.is_null() {
        let _ = writeln!(s, "mode {}", zeta["mode"].as_str().unwrap_or(""));
        let _ = writeln!(s, "Z = {}", zeta["text"].as_str().unwrap_or(""));
    }
    let poles = get("poles");
    if let Some(fams) = poles["families"].as_array() {
        let _ = writeln!(s, "poles:");
        for pf in fams {
            let _ = writeln!(
                s,
                "  Re(s) = {}  multiplicity {}",
                pf["real_part"].as_str().unwrap_or(""),
                pf["multiplicity"]
            );
        }
    }
    let inv = get("invariants");
    if inv.get("beta").is_some() {
        let _ = writeln!(s, "beta = {}  rho = {}", inv["beta"].as_str().unwrap_or(""), inv["rho"]);
    }
    let th = get("theorem_checks");
    if let Some(obj) = th.as_object() {
        for (k, v) in obj {
            if let Some(st) = v.get("status") {
                let _ = writeln!(s, "{k}: {}", st.as_str().unwrap_or(""));
            }
        }
    }
    let or = get("oracle");
    if let Some(series) = or.get("series") {
        let _ = writeln!(s, "oracle series match: {}", series["match"]);
    }
    if let Some(bound) = or.get("expsum").and_then(|e| e.get("bound")) {
        if let Some(c) = bound.get("fitted_C") {
            let _ = writeln!(s, "exponential sums: fitted C = {}", c.as_str().unwrap_or(""));
        }
    }
    s
}

/// Convenience wrapper used by the bindings: Z for `cfg` as normalized JSON.
pub fn zeta_only(cfg: &RunConfig) -> Result<Zeta> {
    let f = cfg.polynomial()?;
    let engine = ZetaEngine::new(f, cfg.context()?, cfg.character()?)?;
    Ok(engine.zeta_full(cfg.mode.parse()?)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_parse() {
        assert_eq!(Checks::parse("all").unwrap(), Checks::all());
        assert_eq!(Checks::parse("none").unwrap(), Checks::default());
        let c = Checks::parse("poles, oracle").unwrap();
        assert!(c.poles && c.oracle && !c.theorem_b && !c.expsum);
        assert!(Checks::parse("poles,nope").is_err());
    }

    #[test]
    fn corpus_line_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"poly":"x*y","p":3}"#).unwrap();
        assert_eq!(cfg.kmax, DEFAULT_KMAX);
        assert_eq!(cfg.mode, "auto");
        assert_eq!(cfg.checks().unwrap(), Checks::defaults());
        assert!(serde_json::from_str::<RunConfig>(r#"{"poly":"x","p":3,"typo":1}"#).is_err());
    }

    #[test]
    fn failures_are_reported() {
        let mut cfg = RunConfig::new("x^2+x*y+y^2", 7);
        cfg.checks = Some("all".into());
        let rep = run_zeta(&cfg).unwrap();
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        assert_eq!(rep.json["theorem_checks"]["largest_pole"]["status"], "pass");
        assert_eq!(
            rep.json["zeta"]["text"],
            "(36/49 + (36/343)*t) / ((1 - 7^-1*t) * (1 - 7^-2*t^2))"
        );
    }
}
