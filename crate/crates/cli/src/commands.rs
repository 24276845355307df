//! One report per subcommand. Each report names the library operation that
//! produced its numbers and carries a `pass` flag for the exit code.

use serde::Serialize;

use drinfeld_core::deform::{check_char_lifts, module_lift_report, LevelKind};
use drinfeld_core::isogeny::quotient_by;
use drinfeld_core::level::{enumerate_gamma0, enumerate_gamma1, enumerate_gamma_full, Gamma0Json};
use drinfeld_core::moduli::{gamma1_transpose_failure, ihara_report, Y0Setup};
use drinfeld_core::skew::{parse_elem, parse_elem_list};
use drinfeld_core::{BaseIdeal, BaseRing, DrinfeldModule, Elem, Error, FiniteField, KernelSubgroup};

use crate::config::SessionConfig;

/// Failure classes for the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

pub type Outcome = Result<(serde_json::Value, bool), Failure>;

/// Version of every report layout; bump together with the files in `schemas/`.
pub const SCHEMA_VERSION: u32 = 1;

fn done<T: Serialize>(schema: &str, report: &T, pass: bool) -> Outcome {
    let mut v = serde_json::to_value(report).map_err(|e| Failure::Invariant(e.to_string()))?;
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("schema".into(), format!("{schema}.v{SCHEMA_VERSION}").into());
    }
    Ok((v, pass))
}

fn coeffs(x: &Elem) -> Vec<u8> {
    x.coeffs().to_vec()
}

fn ideal(a: &BaseRing, text: &str, what: &str) -> Result<BaseIdeal, Failure> {
    let g = a.parse(text).map_err(|e| Failure::Usage(format!("{what}: {e}")))?;
    a.ideal(&g).map_err(|e| Failure::Usage(format!("{what}: {e}")))
}

/// Module given by gamma(T) and the coefficient list `[a_1, .., a_r]`.
pub struct ModuleArgs<'a> {
    pub gamma: &'a str,
    pub coeffs: &'a str,
}

fn module(cfg: &SessionConfig, m: &ModuleArgs) -> Result<(BaseRing, FiniteField, DrinfeldModule), Failure> {
    let a = cfg.base_ring()?;
    let k = cfg.field()?;
    let g = parse_elem(m.gamma, &k).map_err(|e| Failure::Usage(format!("--gamma: {e}")))?;
    let cs = parse_elem_list(m.coeffs, &k).map_err(|e| Failure::Usage(format!("--a: {e}")))?;
    let e = DrinfeldModule::new(&a, &k, g, cs)?;
    Ok((a, k, e))
}

#[derive(Serialize)]
struct ClassifyReport {
    operation: &'static str,
    q: u64,
    field: drinfeld_core::FieldSpec,
    rank: usize,
    characteristic: String,
    h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<Vec<u8>>,
}

pub fn classify(cfg: &SessionConfig, m: &ModuleArgs) -> Outcome {
    let (a, k, e) = module(cfg, m)?;
    let h = e.height_at_characteristic()?;
    let rank2 = e.rank() == 2;
    let report = ClassifyReport {
        operation: "drinfeld::height_at_characteristic",
        q: a.q(),
        field: k.spec(),
        rank: e.rank(),
        characteristic: a.display(e.characteristic().generator()),
        h,
        kind: rank2.then_some(if h == 0 { "supersingular" } else { "ordinary" }),
        j: if rank2 { Some(coeffs(&e.j_invariant()?)) } else { None },
    };
    done("classify", &report, true)
}

#[derive(Serialize)]
struct Divisor {
    prime: String,
    exponents: Vec<u32>,
}

#[derive(Serialize)]
struct TorsionReport {
    operation: &'static str,
    ideal: String,
    field: drinfeld_core::FieldSpec,
    extension_degree: usize,
    dim: usize,
    point_count: u128,
    basis: Vec<Vec<u8>>,
    t_action: Vec<Vec<Vec<u8>>>,
    elementary_divisors: Vec<Divisor>,
    /// sum of deg(prime) * exponent equals dim.
    decomposition_matches: bool,
    pass: bool,
}

pub fn torsion(cfg: &SessionConfig, m: &ModuleArgs, n: &str) -> Outcome {
    let (a, k, e) = module(cfg, m)?;
    let n = ideal(&a, n, "--ideal")?;
    let l = e.splitting_field(&n, cfg.max_ext_degree)?;
    let t = e.torsion_structure(&n, &l)?;
    let total: usize = t
        .elementary_divisors
        .iter()
        .map(|(p, es)| p.degree() * es.iter().sum::<u32>() as usize)
        .sum();
    let ok = total == t.dim() && t.dim() == e.torsion_dimension(&n);
    let report = TorsionReport {
        operation: "drinfeld::torsion_structure",
        ideal: a.display(n.generator()),
        field: l.spec(),
        extension_degree: l.degree() / k.degree(),
        dim: t.dim(),
        point_count: t.point_count(a.q()),
        basis: t.basis.iter().map(coeffs).collect(),
        t_action: t.t_action.iter().map(|row| row.iter().map(coeffs).collect()).collect(),
        elementary_divisors: t
            .elementary_divisors
            .iter()
            .map(|(p, es)| Divisor {
                prime: a.display(p.generator()),
                exponents: es.clone(),
            })
            .collect(),
        decomposition_matches: ok,
        pass: ok,
    };
    done("torsion", &report, ok)
}

#[derive(Serialize)]
struct QuotientChecks {
    commutes: bool,
    kernel_matches: bool,
    height_matches: bool,
}

#[derive(Serialize)]
struct QuotientReport {
    operation: &'static str,
    field: drinfeld_core::FieldSpec,
    kernel_order: u128,
    target_gamma: Vec<u8>,
    target_coeffs: Vec<Vec<u8>>,
    xi: Vec<Vec<u8>>,
    degree: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_j: Option<Vec<u8>>,
    checks: QuotientChecks,
    pass: bool,
}

pub fn quotient(cfg: &SessionConfig, m: &ModuleArgs, ext: usize, points: &str, mult: usize) -> Outcome {
    let (_, k, e) = module(cfg, m)?;
    let l = k.extension(ext)?;
    let pts = parse_elem_list(points, &l).map_err(|e| Failure::Usage(format!("--kernel-points: {e}")))?;
    let h = KernelSubgroup::new(&l, pts, mult);
    let (target, iso) = quotient_by(&e, &h)?;
    let kernel = if l.cardinality().is_some_and(|c| c <= cfg.max_candidates as u128) {
        iso.kernel_points(&l)? == h.points
    } else {
        let dim = (h.points.len() as u128).ilog(l.q() as u128) as usize;
        iso.xi.kernel_basis(&l)?.len() == dim && h.points.iter().all(|x| l.is_zero(&iso.xi.eval(x)))
    };
    let checks = QuotientChecks {
        commutes: iso.verify(),
        kernel_matches: kernel,
        height_matches: iso.xi.height() == Some(mult),
    };
    let pass = checks.commutes && checks.kernel_matches && checks.height_matches;
    let report = QuotientReport {
        operation: "isogeny::quotient_by",
        field: l.spec(),
        kernel_order: h.order(),
        target_gamma: coeffs(target.gamma_t()),
        target_coeffs: target.coeffs().iter().map(coeffs).collect(),
        xi: iso.xi.coeffs().iter().map(coeffs).collect(),
        degree: iso.degree(),
        target_j: (target.rank() == 2)
            .then(|| target.j_invariant().map(|j| coeffs(&j)))
            .transpose()?,
        checks,
        pass,
    };
    done("quotient", &report, pass)
}

#[derive(Serialize)]
struct LevelsReport {
    operation: &'static str,
    kind: LevelKind,
    ideal: String,
    field: drinfeld_core::FieldSpec,
    count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    gamma0: Vec<Gamma0Json>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    generators: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    bases: Vec<[Vec<u8>; 2]>,
    pass: bool,
}

pub fn levels(cfg: &SessionConfig, m: &ModuleArgs, n: &str, kind: LevelKind, list: bool) -> Outcome {
    let (a, _, e) = module(cfg, m)?;
    let n = ideal(&a, n, "--ideal")?;
    let l = e.splitting_field(&n, cfg.max_ext_degree)?;
    let mut report = LevelsReport {
        operation: "",
        kind,
        ideal: a.display(n.generator()),
        field: l.spec(),
        count: 0,
        gamma0: Vec::new(),
        generators: Vec::new(),
        bases: Vec::new(),
        pass: true,
    };
    match kind {
        LevelKind::Gamma0 => {
            let s = enumerate_gamma0(&e, &n, &l)?;
            report.operation = "level::enumerate_gamma0";
            report.count = s.len();
            if list {
                report.gamma0 = s.iter().map(|g| g.to_json(&a)).collect();
            }
        }
        LevelKind::Gamma1 => {
            let s = enumerate_gamma1(&e, &n, &l)?;
            report.operation = "level::enumerate_gamma1";
            report.count = s.len();
            if list {
                report.generators = s.iter().map(|g| coeffs(&g.generator)).collect();
            }
        }
        LevelKind::GammaFull => {
            let s = enumerate_gamma_full(&e, &n, &l)?;
            report.operation = "level::enumerate_gamma_full";
            report.count = s.len();
            if list {
                report.bases = s.iter().map(|g| [coeffs(&g.images[0]), coeffs(&g.images[1])]).collect();
            }
        }
    }
    done("levels", &report, true)
}

pub fn ihara(
    cfg: &SessionConfig,
    p: &str,
    n: &str,
    genus: Option<i64>,
    closure_multiplier: usize,
    verbose: bool,
    gamma1_demo: bool,
) -> Outcome {
    let a = cfg.base_ring()?;
    let p = ideal(&a, p, "--p")?;
    let n = ideal(&a, n, "--n")?;
    if closure_multiplier == 0 {
        return Err(Failure::Usage("--closure-multiplier must be positive".into()));
    }
    let setup = Y0Setup::new(&a, &p, &n, 2, closure_multiplier)?;
    let mut report = ihara_report(&setup, genus)?;
    let pass = report.special_le_n2 && report.pass != Some(false);
    if !verbose {
        report.points.clear();
    }
    let (mut v, pass) = done("ihara", &report, pass)?;
    if gamma1_demo {
        let w = gamma1_transpose_failure(&setup)?;
        v["gamma1_demo"] = serde_json::to_value(w).map_err(|e| Failure::Invariant(e.to_string()))?;
    }
    Ok((v, pass))
}

/// `module` for lifts of the module alone, otherwise a level kind.
pub fn deform_check(cfg: &SessionConfig, m: &ModuleArgs, kind: &str) -> Outcome {
    let (_, _, e) = module(cfg, m)?;
    if kind == "module" {
        let r = module_lift_report(&e)?;
        let pass = r.pass;
        return done("deform-check", &r, pass);
    }
    let kind = LevelKind::parse(kind)
        .ok_or_else(|| Failure::Usage(format!("unknown kind `{kind}` (module, gamma0, gamma1, full)")))?;
    let r = check_char_lifts(kind, &e)?;
    let pass = r.pass;
    done("deform-check", &r, pass)
}
