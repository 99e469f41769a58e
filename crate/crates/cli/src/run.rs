//! Dispatch from a [`JobSpec`] to the core library, and the result document.

use std::collections::BTreeSet;

use serde::Serialize;

use fpinv_core::bsroots::{bs_roots_from_sets, verify_bs_vs_fjn, BsRootReport, TruncationSet};
use fpinv_core::frobroot::{frobenius_root, PowerRoots};
use fpinv_core::invariants::{
    approx_roots_from, f_jumping_in_interval, f_jumping_numbers_with, f_threshold_estimate, generator_count,
    nu_invariants_with, nu_j, stable_exponent, FjEntry, TestIdeals, DEFAULT_DEPTH,
};
use fpinv_core::padic::{digits_of_rational, PadicRational};
use fpinv_core::{parse_poly, Fraction, Ideal, MonomialOrder, PrimeModulus, Ring, VariableContext};

use crate::job::{Command, JobSpec, Located};
use crate::CliError;

pub const DEFAULT_E: u32 = 1;
pub const DEFAULT_E_MAX: u32 = 6;
pub const DEFAULT_RANGE_TOP: u64 = 1;

/// Default refinement precision for `fjn` and `verify`. Binary expansions
/// are short, so p = 2 looks further.
pub fn default_precision(p: u64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}

/// The job as actually run, defaults filled in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobEcho {
    pub command: Command,
    pub p: u64,
    pub vars: Vec<String>,
    pub order: &'static str,
    pub gens: Vec<Located>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Located>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_top: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootOut {
    pub value: String,
    pub digits: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FjOut {
    Exact {
        value: String,
    },
    Interval {
        lo: String,
        hi: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        candidate: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationOut {
    pub level: u32,
    pub valid: Vec<u64>,
}

/// Command-specific result. Fractions are exact `a/b` strings, ideals are
/// the reduced Gröbner basis in ascending leading-monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    FrobRoot {
        ideal: Vec<String>,
    },
    Nu {
        level: u32,
        window: u64,
        members: Vec<u64>,
    },
    NuJ {
        level: u32,
        nu_j: u64,
        threshold: String,
    },
    TestIdeal {
        lambda: String,
        e0: u32,
        ideal: Vec<String>,
    },
    ApproxPoly {
        level: u32,
        roots: Vec<String>,
    },
    Fjn {
        e0: u32,
        entries: Vec<FjOut>,
    },
    FjnInterval {
        e0: u32,
        interval: String,
        jump: bool,
    },
    StableExp {
        e0: u32,
        witnesses: Vec<Vec<String>>,
    },
    BsRoots {
        checked_level: u32,
        roots: Vec<RootOut>,
        unresolved: Vec<String>,
    },
    Verify {
        agrees: Option<bool>,
        bs_roots: Vec<String>,
        fj_values: Vec<String>,
    },
    Partial {
        status: &'static str,
        truncation_sets: Vec<TruncationOut>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub job: JobEcho,
    pub result: Payload,
    pub warnings: Vec<String>,
    /// Wall time, only when requested; off by default so documents stay
    /// byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result documents serialize");
        s.push('\n');
        s
    }
}

/// Ring, ideal and resolved parameters for one job.
struct Prepared {
    echo: JobEcho,
    ring: Ring,
    ideal: Ideal,
}

fn parse_list(ring: &Ring, items: &[Located]) -> Result<Ideal, CliError> {
    let mut polys = Vec::with_capacity(items.len());
    for item in items {
        let f = parse_poly(&item.text, ring).map_err(|e| located(e, item))?;
        polys.push(f);
    }
    Ok(Ideal::new(ring, polys)?)
}

fn located(e: fpinv_core::Error, at: &Located) -> CliError {
    use fpinv_core::Error as E;
    let offset = match &e {
        E::Syntax { offset, .. } | E::UnknownIdentifier { offset, .. } => *offset,
        E::ExponentOverflow => 0,
        _ => return e.into(),
    };
    let message = match e {
        E::Syntax { message, .. } => message,
        E::UnknownIdentifier { name, .. } => format!("unknown identifier `{name}`"),
        other => other.to_string(),
    };
    CliError::Parse {
        line: at.line,
        column: at.column + offset,
        message,
    }
}

fn prepare(spec: &JobSpec) -> Result<Prepared, CliError> {
    let command = spec
        .command
        .ok_or_else(|| CliError::Usage("job has no command".into()))?;
    let p = spec.p.ok_or_else(|| CliError::Usage("job has no p".into()))?;
    let modulus = PrimeModulus::new(p)?;
    let order = if spec.lex {
        MonomialOrder::Lex
    } else {
        MonomialOrder::Grevlex
    };
    let ring = VariableContext::new(&spec.vars, modulus, order)?;
    let ideal = parse_list(&ring, &spec.gens)?;
    let precision = spec.precision.unwrap_or_else(|| default_precision(p));
    let mut echo = JobEcho {
        command,
        p,
        vars: spec.vars.clone(),
        order: if spec.lex { "lex" } else { "grevlex" },
        gens: spec.gens.clone(),
        e: None,
        n: None,
        k: None,
        j: None,
        lambda: None,
        e_max: None,
        precision: None,
        depth: None,
        range_top: None,
    };
    match command {
        Command::FrobRoot => {
            echo.e = Some(spec.e.unwrap_or(DEFAULT_E));
            echo.n = Some(spec.n.unwrap_or(1));
        }
        Command::Nu => {
            echo.e = Some(spec.e.unwrap_or(DEFAULT_E));
            echo.j = spec.j.clone();
        }
        Command::ApproxPoly => echo.e = Some(spec.e.unwrap_or(DEFAULT_E)),
        Command::TestIdeal => {
            let lambda = spec
                .lambda
                .clone()
                .ok_or_else(|| CliError::Precondition("test-ideal needs `lambda = n/p^e`".into()))?;
            echo.lambda = Some(lambda);
            echo.depth = Some(spec.depth.unwrap_or(DEFAULT_DEPTH));
        }
        Command::Fjn => {
            echo.depth = Some(spec.depth.unwrap_or(DEFAULT_DEPTH));
            match (spec.e, spec.k) {
                (Some(e), Some(k)) => {
                    echo.e = Some(e);
                    echo.k = Some(k);
                }
                (None, None) => {
                    echo.range_top = Some(spec.range_top.unwrap_or(DEFAULT_RANGE_TOP));
                    echo.precision = Some(precision);
                }
                _ => {
                    return Err(CliError::Precondition(
                        "fjn takes either both `e` and `k` (one interval) or neither".into(),
                    ))
                }
            }
            if spec.k.is_some() && (spec.range_top.is_some() || spec.precision.is_some()) {
                return Err(CliError::Precondition(
                    "fjn with `e` and `k` checks one interval; drop `range_top` and `E`".into(),
                ));
            }
        }
        Command::StableExp => echo.depth = Some(spec.depth.unwrap_or(DEFAULT_DEPTH)),
        Command::BsRoots => echo.e_max = Some(spec.e_max.unwrap_or(DEFAULT_E_MAX)),
        Command::Verify => {
            echo.e_max = Some(spec.e_max.unwrap_or(DEFAULT_E_MAX));
            echo.depth = Some(spec.depth.unwrap_or(DEFAULT_DEPTH));
            echo.precision = Some(precision);
            // Skoda makes jumping numbers periodic above r, so (0, r] sees
            // every class mod Z.
            let r = if ideal.is_zero() || ideal.is_unit() {
                1
            } else {
                generator_count(&ideal) as u64
            };
            echo.range_top = Some(spec.range_top.unwrap_or(r));
        }
    }
    validate(&echo, &ideal)?;
    Ok(Prepared { echo, ring, ideal })
}

/// Parameter checks that do not need any algebra.
fn validate(echo: &JobEcho, ideal: &Ideal) -> Result<(), CliError> {
    let bad = |m: &str| Err(CliError::Precondition(m.to_string()));
    if echo.command != Command::FrobRoot && (ideal.is_zero() || ideal.is_unit()) {
        return bad("invariants need a proper nonzero ideal");
    }
    if echo.command == Command::ApproxPoly && !ideal.is_principal() {
        return bad("approx-poly needs a principal ideal");
    }
    if matches!(echo.command, Command::Nu | Command::ApproxPoly) && echo.e == Some(0) {
        return bad("`e` must be at least 1");
    }
    if echo.depth == Some(0) {
        return bad("`depth` must be at least 1");
    }
    if echo.precision == Some(0) {
        return bad("`E` must be at least 1");
    }
    if echo.range_top == Some(0) {
        return bad("`range_top` must be at least 1");
    }
    if matches!(echo.e_max, Some(m) if m < 2) {
        return bad("`e_max` must be at least 2");
    }
    Ok(())
}

fn render_ideal(i: &Ideal) -> Vec<String> {
    i.reduced_basis().polys().iter().map(|f| f.to_string()).collect()
}

fn root_out(b: &PadicRational) -> RootOut {
    RootOut {
        value: b.to_string(),
        digits: digits_of_rational(b).to_string(),
    }
}

fn fj_out(entry: &FjEntry) -> FjOut {
    match entry {
        FjEntry::Exact(v) => FjOut::Exact { value: v.to_string() },
        FjEntry::Interval { lo, hi, candidate } => FjOut::Interval {
            lo: lo.to_string(),
            hi: hi.to_string(),
            candidate: candidate.map(|c| c.to_string()),
        },
    }
}

fn stable_warning(e0: u32, depth: u32) -> String {
    format!("stable exponent e0 = {e0} is heuristic: agreement checked for {depth} further level(s)")
}

fn unresolved_warning(report: &BsRootReport) -> Option<String> {
    (!report.unresolved.is_empty()).then(|| {
        format!(
            "{} level-{} prefix(es) unresolved; raise e_max",
            report.unresolved.len(),
            report.e_max
        )
    })
}

/// Truncation sets for levels `1..=top`, reported one at a time.
fn staged_truncation_sets(
    a: &Ideal,
    top: u32,
    progress: &mut dyn FnMut(&TruncationSet),
) -> Result<Vec<TruncationSet>, CliError> {
    let mut roots = PowerRoots::new(&a.interreduced());
    let mut sets = Vec::with_capacity(top as usize);
    for e in 1..=top {
        let set = TruncationSet::from_nu(&nu_invariants_with(&mut roots, e)?);
        progress(&set);
        sets.push(set);
    }
    Ok(sets)
}

pub fn partial_payload(sets: &[TruncationSet]) -> Payload {
    Payload::Partial {
        status: "partial",
        truncation_sets: sets
            .iter()
            .map(|s| TruncationOut {
                level: s.level,
                valid: s.valid.iter().copied().collect(),
            })
            .collect(),
    }
}

/// Echo a spec without running it; used for partial documents.
pub fn echo_of(spec: &JobSpec) -> Result<JobEcho, CliError> {
    Ok(prepare(spec)?.echo)
}

pub fn run_job(spec: &JobSpec) -> Result<ResultDocument, CliError> {
    run_job_with_progress(spec, &mut |_| {})
}

/// As [`run_job`], reporting each finished truncation set of a `bs-roots`
/// or `verify` job as it completes.
pub fn run_job_with_progress(
    spec: &JobSpec,
    progress: &mut dyn FnMut(&TruncationSet),
) -> Result<ResultDocument, CliError> {
    let Prepared { echo, ring, ideal } = prepare(spec)?;
    let mut warnings = Vec::new();
    let result = match echo.command {
        Command::FrobRoot => {
            let (e, n) = (echo.e.unwrap(), echo.n.unwrap());
            let root = if n == 1 {
                frobenius_root(&ideal, e)
            } else {
                PowerRoots::new(&ideal).root(n, e)
            };
            Payload::FrobRoot {
                ideal: render_ideal(&root),
            }
        }
        Command::Nu => {
            let e = echo.e.unwrap();
            match &echo.j {
                Some(items) => {
                    let j = parse_list(&ring, items)?;
                    Payload::NuJ {
                        level: e,
                        nu_j: nu_j(&ideal, &j, e)?,
                        threshold: f_threshold_estimate(&ideal, &j, e)?.to_string(),
                    }
                }
                None => {
                    let nu = nu_invariants_with(&mut PowerRoots::new(&ideal.interreduced()), e)?;
                    Payload::Nu {
                        level: e,
                        window: nu.window(),
                        members: nu.members.iter().copied().collect(),
                    }
                }
            }
        }
        Command::ApproxPoly => {
            let e = echo.e.unwrap();
            let nu = nu_invariants_with(&mut PowerRoots::new(&ideal.interreduced()), e)?;
            Payload::ApproxPoly {
                level: e,
                roots: approx_roots_from(&nu)
                    .fractions()
                    .iter()
                    .map(|f| f.to_string())
                    .collect(),
            }
        }
        Command::TestIdeal => {
            let text = echo.lambda.as_deref().unwrap();
            let lambda: Fraction = text
                .parse()
                .map_err(|_| CliError::Precondition(format!("malformed lambda `{text}`, expected n/p^e")))?;
            let depth = echo.depth.unwrap();
            let e0 = stable_exponent(&ideal, depth)?.e0;
            warnings.push(stable_warning(e0, depth));
            let tau = TestIdeals::new(&ideal, e0)?.at_fraction(lambda)?;
            Payload::TestIdeal {
                lambda: lambda.to_string(),
                e0,
                ideal: render_ideal(&tau),
            }
        }
        Command::Fjn => {
            let depth = echo.depth.unwrap();
            let e0 = stable_exponent(&ideal, depth)?.e0;
            warnings.push(stable_warning(e0, depth));
            match (echo.e, echo.k) {
                (Some(e), Some(k)) => {
                    let q = ring
                        .p()
                        .power(e)
                        .ok_or(fpinv_core::Error::Overflow("p^e exceeds u64"))? as i128;
                    let lo = Fraction::new(k as i128, q);
                    let hi = Fraction::new(k as i128 + 1, q);
                    Payload::FjnInterval {
                        e0,
                        interval: format!("({lo}, {hi}]"),
                        jump: f_jumping_in_interval(&ideal, e0, e, k)?,
                    }
                }
                _ => {
                    let entries = f_jumping_numbers_with(&ideal, e0, echo.range_top.unwrap(), echo.precision.unwrap())?;
                    if entries.iter().any(|x| x.value().is_none()) {
                        warnings.push("some intervals have no candidate of short period; raise E".into());
                    }
                    Payload::Fjn {
                        e0,
                        entries: entries.iter().map(fj_out).collect(),
                    }
                }
            }
        }
        Command::StableExp => {
            let depth = echo.depth.unwrap();
            let report = stable_exponent(&ideal, depth)?;
            warnings.push(stable_warning(report.e0, depth));
            Payload::StableExp {
                e0: report.e0,
                witnesses: report.witnesses.iter().map(render_ideal).collect(),
            }
        }
        Command::BsRoots => {
            let e_max = echo.e_max.unwrap();
            let sets = staged_truncation_sets(&ideal, e_max + 1, progress)?;
            let report = bs_roots_from_sets(&sets, e_max)?;
            warnings.extend(unresolved_warning(&report));
            Payload::BsRoots {
                checked_level: report.checked_level,
                roots: report.roots.iter().map(root_out).collect(),
                unresolved: report.unresolved.iter().map(|d| d.to_string()).collect(),
            }
        }
        Command::Verify => {
            let e_max = echo.e_max.unwrap();
            let sets = staged_truncation_sets(&ideal, e_max + 1, progress)?;
            let report = bs_roots_from_sets(&sets, e_max)?;
            let depth = echo.depth.unwrap();
            let e0 = stable_exponent(&ideal, depth)?.e0;
            warnings.push(stable_warning(e0, depth));
            let fj = f_jumping_numbers_with(&ideal, e0, echo.range_top.unwrap(), echo.precision.unwrap())?;
            let agrees = match verify_bs_vs_fjn(&ideal, &report, &fj) {
                Ok(b) => Some(b),
                Err(fpinv_core::Error::Unresolved) => {
                    warnings.extend(unresolved_warning(&report));
                    if fj.iter().any(|x| x.value().is_none()) {
                        warnings.push("some jumping-number intervals have no candidate; raise E".into());
                    }
                    None
                }
                Err(other) => return Err(other.into()),
            };
            let fj_values: BTreeSet<Fraction> = fj.iter().filter_map(FjEntry::value).collect();
            Payload::Verify {
                agrees,
                bs_roots: report.roots.iter().map(|b| b.to_string()).collect(),
                fj_values: fj_values.iter().map(|v| v.to_string()).collect(),
            }
        }
    };
    Ok(ResultDocument {
        tool: "fpinv",
        version: env!("CARGO_PKG_VERSION"),
        job: echo,
        result,
        warnings,
        timing_ms: None,
    })
}
