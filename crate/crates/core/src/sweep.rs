//! Sweeps over one-parameter families of maps of P^1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::Rational;
use crate::closure::classify_structure;
use crate::dynatomic::root_multiplicities;
use crate::error::{Error, Result};
use crate::pipeline::{run, RunConfig};
use crate::poly::map::HomogeneousMap;
use crate::poly::multipoly::MultiPoly;
use crate::poly::parse::parse_map;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `z^d + c`, `c` over the admissible values of height at most `height_cap`.
    PowerPlusC { d: u32, height_cap: u64 },
    /// `z^d + c z^e`, `c` over all rationals of height at most `height_cap`.
    PowerPlusCze { d: u32, e: u32, height_cap: u64 },
    ConservativeA { d_min: u32, d_max: u32 },
    ConservativeB { d_min: u32, d_max: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    /// Number of auto-selected primes per map.
    #[serde(default = "default_primes")]
    pub primes: usize,
}

fn default_primes() -> usize {
    3
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidMap(m.to_string()));
        match self.family {
            Family::PowerPlusC { d, height_cap } if d < 2 || height_cap < 1 => bad("power_plus_c needs d >= 2 and height_cap >= 1"),
            Family::PowerPlusCze { d, e, height_cap } if d < 2 || e >= d || height_cap < 1 => bad("power_plus_cze needs d >= 2, e < d and height_cap >= 1"),
            Family::ConservativeA { d_min, d_max } | Family::ConservativeB { d_min, d_max } if d_min < 2 || d_max < d_min => {
                bad("conservative families need 2 <= d_min <= d_max")
            }
            _ if self.primes == 0 => bad("at least one prime is needed"),
            _ => Ok(()),
        }
    }
}

/// All `c = a/b^d` in lowest terms with `max(|a|, b^d) <= cap`, ordered by `b`, then `a`.
pub fn admissible_c_values(d: u32, cap: u64) -> Vec<Rational> {
    let cap = BigInt::from(cap);
    let mut out = Vec::new();
    let mut b = BigInt::one();
    loop {
        let bd = b.pow(d);
        if bd > cap {
            return out;
        }
        let mut a = -cap.clone();
        while a <= cap {
            if a.gcd(&b).is_one() || (a.is_zero() && b.is_one()) {
                out.push(Rational::new(a.clone(), bd.clone()));
            }
            a += 1;
        }
        b += 1;
    }
}

/// All rationals `a/b` in lowest terms with `max(|a|, b) <= cap`, ordered by `b`, then `a`.
pub fn rationals_up_to_height(cap: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for b in 1..=cap as i64 {
        for a in -(cap as i64)..=cap as i64 {
            if a.gcd(&b) == 1 || (a == 0 && b == 1) {
                out.push(Rational::new(BigInt::from(a), BigInt::from(b)));
            }
        }
    }
    out
}

fn xy(d: u32, e0: u32, e1: u32, c: BigInt) -> (Vec<u32>, Rational) {
    debug_assert_eq!(e0 + e1, d);
    (vec![e0, e1], Rational::from_integer(c))
}

/// `[b x^d + a x^e y^(d-e), b y^d]` for `c = a/b`; `e = 0` gives `z^d + c`.
pub fn power_plus_c_map(d: u32, e: u32, c: &Rational) -> Result<HomogeneousMap> {
    let (a, b) = (c.numer().clone(), c.denom().clone());
    let mut f0 = MultiPoly::from_terms(2, [xy(d, d, 0, b.clone())]);
    f0.add_term(vec![e, d - e], Rational::from_integer(a));
    let f1 = MultiPoly::from_terms(2, [xy(d, 0, d, b)]);
    HomogeneousMap::new(vec![f0, f1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConservativeKind {
    A,
    B,
}

/// Family A: `((d-2) z^d + d z) / (d z^(d-1) + (d-2))`; family B: `d/(d-1) z + z^d`.
/// Every rational critical point of the result is checked to be fixed.
pub fn conservative_family(kind: ConservativeKind, d: u32) -> Result<HomogeneousMap> {
    if d < 2 {
        return Err(Error::InvalidMap(format!("conservative family needs d >= 2, got {}", d)));
    }
    let text = match kind {
        ConservativeKind::A => format!("({} z^{} + {} z) / ({} z^{} + {})", d - 2, d, d, d, d - 1, d - 2),
        ConservativeKind::B => format!("{}/{} z + z^{}", d, d - 1, d),
    };
    let f = parse_map(&text)?;
    check_conservative(&f)?;
    Ok(f)
}

/// Rational zeros of the Jacobian determinant must be fixed points.
pub fn check_conservative(f: &HomogeneousMap) -> Result<()> {
    let c = f.coords();
    let jac = c[0].derivative(0).mul(&c[1].derivative(1)).sub(&c[0].derivative(1).mul(&c[1].derivative(0)));
    for p in root_multiplicities(&jac)?.keys() {
        if &f.evaluate(p)? != p {
            return Err(Error::Degeneracy(format!("critical point {} of {} is not fixed", p, f)));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub c: Option<String>,
    pub map: Option<String>,
    pub n_periodic: usize,
    pub n_preperiodic: usize,
    pub cycles: Vec<u64>,
    pub components: Vec<usize>,
    pub structure: Option<String>,
    /// "ok", or "incomplete: <reason>".
    pub status: String,
}

impl SweepRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn label(&self) -> String {
        match &self.c {
            Some(c) => format!("c={}", c),
            None => self.params.iter().map(|(k, v)| format!("{}={}", k, v)).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub value: u64,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InventoryEntry {
    pub count: usize,
    pub example: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub record: &'static str,
    pub maps: usize,
    pub incomplete: usize,
    pub max_period: Option<Witness>,
    pub max_periodic: Option<Witness>,
    pub max_preperiodic: Option<Witness>,
    pub structures: BTreeMap<String, InventoryEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    /// One JSON object per map, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary).expect("summary serializes"));
        out.push('\n');
        out
    }
}

struct Job {
    family: &'static str,
    params: BTreeMap<String, String>,
    c: Option<String>,
    build: Box<dyn Fn() -> Result<HomogeneousMap> + Send + Sync>,
}

fn jobs(spec: &SweepSpec) -> Vec<Job> {
    let p = |kv: &[(&str, String)]| kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>();
    match spec.family.clone() {
        Family::PowerPlusC { d, height_cap } => admissible_c_values(d, height_cap)
            .into_iter()
            .map(|c| Job {
                family: "power_plus_c",
                params: p(&[("d", d.to_string())]),
                c: Some(c.to_string()),
                build: Box::new(move || power_plus_c_map(d, 0, &c)),
            })
            .collect(),
        Family::PowerPlusCze { d, e, height_cap } => rationals_up_to_height(height_cap)
            .into_iter()
            .filter(|c| !c.is_zero() || e == 0)
            .map(|c| Job {
                family: "power_plus_cze",
                params: p(&[("d", d.to_string()), ("e", e.to_string())]),
                c: Some(c.to_string()),
                build: Box::new(move || power_plus_c_map(d, e, &c)),
            })
            .collect(),
        Family::ConservativeA { d_min, d_max } | Family::ConservativeB { d_min, d_max } => {
            let kind = if matches!(spec.family, Family::ConservativeA { .. }) { ConservativeKind::A } else { ConservativeKind::B };
            let name = if kind == ConservativeKind::A { "conservative_a" } else { "conservative_b" };
            (d_min..=d_max)
                .map(|d| Job { family: name, params: p(&[("d", d.to_string())]), c: None, build: Box::new(move || conservative_family(kind, d)) })
                .collect()
        }
    }
}

/// Resource errors are returned; every other failure becomes an incomplete record.
fn run_job(job: &Job, cfg: &RunConfig) -> Result<SweepRecord> {
    let mut rec = SweepRecord {
        family: job.family.to_string(),
        params: job.params.clone(),
        c: job.c.clone(),
        map: None,
        n_periodic: 0,
        n_preperiodic: 0,
        cycles: Vec::new(),
        components: Vec::new(),
        structure: None,
        status: "ok".to_string(),
    };
    let f = match (job.build)() {
        Ok(f) => f,
        Err(e @ Error::Resource(_)) => return Err(e),
        Err(e) => {
            rec.status = format!("incomplete: {}", e);
            return Ok(rec);
        }
    };
    rec.map = Some(f.render());
    match run(&f, cfg) {
        Ok(doc) => {
            rec.n_periodic = doc.periodic.len();
            rec.n_preperiodic = doc.summary.total;
            rec.cycles = doc.summary.cycles.clone();
            rec.components = doc.summary.components.clone();
            rec.structure = classify_structure(&doc.graph).ok();
            if !doc.complete {
                rec.status = "incomplete: periods skipped or unsafe height bound".to_string();
            }
        }
        Err(e @ Error::Resource(_)) => return Err(e),
        Err(e) => rec.status = format!("incomplete: {}", e),
    }
    Ok(rec)
}

/// Runs every map of the family through the full pipeline in parallel and
/// merges the records in parameter order. A resource error aborts the sweep.
pub fn run_sweep(spec: &SweepSpec, base: &RunConfig) -> Result<SweepReport> {
    spec.validate()?;
    let cfg = RunConfig { primes: crate::pipeline::PrimeChoice::Auto(spec.primes), ..base.clone() };
    let records: Vec<SweepRecord> = jobs(spec).par_iter().map(|j| run_job(j, &cfg)).collect::<Result<_>>()?;
    let summary = summarize(&records);
    Ok(SweepReport { records, summary })
}

fn best(records: &[SweepRecord], key: impl Fn(&SweepRecord) -> u64) -> Option<Witness> {
    let mut out: Option<Witness> = None;
    for r in records.iter().filter(|r| r.is_ok()) {
        let v = key(r);
        if out.as_ref().is_none_or(|w| v > w.value) {
            out = Some(Witness { value: v, witness: r.label() });
        }
    }
    out
}

pub fn structure_inventory(records: &[SweepRecord]) -> BTreeMap<String, InventoryEntry> {
    let mut inv: BTreeMap<String, InventoryEntry> = BTreeMap::new();
    for r in records {
        if let Some(s) = &r.structure {
            inv.entry(s.clone()).or_insert_with(|| InventoryEntry { count: 0, example: r.label() }).count += 1;
        }
    }
    inv
}

pub fn summarize(records: &[SweepRecord]) -> SweepSummary {
    SweepSummary {
        record: "summary",
        maps: records.len(),
        incomplete: records.iter().filter(|r| !r.is_ok()).count(),
        max_period: best(records, |r| r.cycles.iter().copied().max().unwrap_or(0)),
        max_periodic: best(records, |r| r.n_periodic as u64),
        max_preperiodic: best(records, |r| r.n_preperiodic as u64),
        structures: structure_inventory(records),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[Rational]) -> Vec<String> {
        v.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn admissible_values() {
        let v = strs(&admissible_c_values(2, 16));
        for c in ["-15/16", "-7/4", "-3/4", "-2", "-1", "0"] {
            assert!(v.contains(&c.to_string()), "{}", c);
        }
        assert!(!v.contains(&"1/3".to_string()));
        assert!(!v.contains(&"-29/16".to_string()) && !v.contains(&"-21/16".to_string()));
        assert!(strs(&admissible_c_values(2, 29)).contains(&"-29/16".to_string()));
        let cubes = admissible_c_values(3, 8);
        assert!(cubes.iter().all(|c| [1, 8].contains(&c.denom().to_string().parse::<i32>().unwrap())));
        assert!(!strs(&cubes).contains(&"1/4".to_string()));
        assert_eq!(strs(&admissible_c_values(2, 1)), ["-1", "0", "1"]);
        let mut sorted = admissible_c_values(2, 40);
        let n = sorted.len();
        sorted.dedup();
        assert_eq!(sorted.len(), n);
    }

    #[test]
    fn conservative_maps() {
        assert!(conservative_family(ConservativeKind::A, 2).is_err());
        assert_eq!(conservative_family(ConservativeKind::A, 3).unwrap().render(), "[x^3 + 3*x*y^2, 3*x^2*y + y^3]");
        assert_eq!(conservative_family(ConservativeKind::B, 2).unwrap().render(), "[x^2 + 2*x*y, y^2]");
        for d in 3..7 {
            conservative_family(ConservativeKind::B, d).unwrap();
        }
    }

    #[test]
    fn small_sweeps() {
        let spec = SweepSpec { family: Family::PowerPlusC { d: 2, height_cap: 29 }, primes: 3 };
        let rep = run_sweep(&spec, &RunConfig::default()).unwrap();
        let s = &rep.summary;
        assert_eq!(s.incomplete, 0);
        assert_eq!(s.max_period, Some(Witness { value: 3, witness: "c=-29/16".into() }));
        assert_eq!(s.max_periodic, Some(Witness { value: 5, witness: "c=-21/16".into() }));
        assert_eq!(s.max_preperiodic, Some(Witness { value: 9, witness: "c=-29/16".into() }));
        let a = rep.records.iter().find(|r| r.c.as_deref() == Some("-29/16")).unwrap();
        let b = rep.records.iter().find(|r| r.c.as_deref() == Some("-21/16")).unwrap();
        assert_ne!(a.structure, b.structure);
        let lines = rep.to_json_lines();
        assert_eq!(lines.lines().count(), rep.records.len() + 1);
        assert!(lines.lines().last().unwrap().contains("\"record\":\"summary\""));

        let cubic = run_sweep(&SweepSpec { family: Family::PowerPlusC { d: 3, height_cap: 8 }, primes: 3 }, &RunConfig::default()).unwrap();
        assert_eq!(cubic.summary.max_period, Some(Witness { value: 1, witness: "c=-8".into() }));
        assert_eq!(cubic.summary.max_preperiodic, Some(Witness { value: 4, witness: "c=0".into() }));
    }
}
