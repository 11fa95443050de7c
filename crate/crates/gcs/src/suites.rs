//! Verification suites. Each suite is a list of independent checks that run
//! in parallel; every check draws from its own RNG, seeded from the run seed
//! and the check id, so results do not depend on scheduling.

use std::collections::BTreeMap;

use gcs_core::band::{self, BandPoint};
use gcs_core::charge::{self, ChargeState, NodeType, Reachability};
use gcs_core::completeness::{self, EliminationCertificate, LedgerRow};
use gcs_core::double::{self, DoubleFamily, KappaRow, Member};
use gcs_core::engine::{GeneralizedSeed, VertexKind};
use gcs_core::exact::{functions_equal, sample_points, Coord, IdentityConfig, IdentityVerdict, Point, RegularFunction, Q};
use gcs_core::poisson::{self, CompatFailure, CompatReport, LogCanonicity};
use gcs_core::{rng_from_seed, Error, Rng};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{matrix_json, point_json, q_json, CheckRecord, Parameters, Status, VerificationReport};
use crate::seedfile::Family;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    LogCanonical,
    Compatibility,
    Identities,
    Completeness,
    Band,
    Charge,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::LogCanonical => "log-canonical",
            Suite::Compatibility => "compatibility",
            Suite::Identities => "identities",
            Suite::Completeness => "completeness",
            Suite::Band => "band",
            Suite::Charge => "charge",
            Suite::All => "all",
        }
    }
}

/// Everything a suite needs.
#[derive(Clone, Debug)]
pub struct Config {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub points: usize,
    pub rng_seed: u64,
    pub range: i64,
    pub grid: i64,
    pub charge_bound: i64,
    /// Term budget for symbolic expansions.
    pub term_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            family: Family::Double,
            n: 3,
            k: 2,
            points: 5,
            rng_seed: 0,
            range: 1_000_000,
            grid: 30,
            charge_bound: 8,
            term_limit: 500_000,
        }
    }
}

impl Config {
    pub fn parameters(&self) -> Parameters {
        Parameters {
            n: self.n,
            k: self.k,
            family: self.family.as_str().into(),
            points: self.points,
            rng_seed: self.rng_seed,
            range: self.range,
            grid: self.grid,
            charge_bound: self.charge_bound,
        }
    }

    fn identity(&self) -> IdentityConfig {
        IdentityConfig { trials: self.points, range: self.range, ..IdentityConfig::default() }
    }

    fn double_points(&self, n: usize, rng: &mut Rng) -> Vec<Point> {
        sample_points(n, self.points, self.range, rng)
    }

    fn band_points(&self, k: usize, n: usize, rng: &mut Rng) -> Result<Vec<BandPoint>, Error> {
        (0..self.points).map(|_| BandPoint::random(k, n, self.range, rng)).collect()
    }
}

/// Result of one check before it is stamped with its id.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub witness: Option<Value>,
    pub values: Option<Value>,
}

impl Outcome {
    fn new(ok: bool) -> Self {
        Outcome { status: Status::of(ok), witness: None, values: None }
    }

    fn excluded(reason: &str) -> Self {
        Outcome { status: Status::Excluded, witness: None, values: Some(json!({ "reason": reason })) }
    }

    fn witness(mut self, w: Option<Value>) -> Self {
        self.witness = w;
        self
    }

    fn values(mut self, v: Value) -> Self {
        self.values = Some(v);
        self
    }
}

type CheckFn = Box<dyn Fn(&Config, &mut Rng) -> Result<Outcome, Error> + Send + Sync>;

pub struct Check {
    pub id: String,
    pub anchor: String,
    run: CheckFn,
}

fn check(id: &str, anchor: &str, run: impl Fn(&Config, &mut Rng) -> Result<Outcome, Error> + Send + Sync + 'static) -> Check {
    Check { id: id.into(), anchor: anchor.into(), run: Box::new(run) }
}

/// 64-bit FNV-1a, used to derive per-check RNG seeds.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn run_checks(cfg: &Config, checks: &[Check]) -> Vec<CheckRecord> {
    checks
        .par_iter()
        .map(|c| {
            let mut rng = rng_from_seed(cfg.rng_seed ^ fnv1a(&c.id));
            let out = (c.run)(cfg, &mut rng).unwrap_or_else(|e| Outcome::new(false).witness(Some(json!({ "error": e.to_string() }))));
            CheckRecord { id: c.id.clone(), anchor: c.anchor.clone(), status: out.status, witness: out.witness, values: out.values }
        })
        .collect()
}

fn config_error(msg: String) -> CliError {
    CliError::Config(msg)
}

/// Reject parameter combinations a suite cannot run with.
pub fn validate(suite: Suite, cfg: &Config) -> Result<(), CliError> {
    let (n, k) = (cfg.n, cfg.k);
    if cfg.points == 0 {
        return Err(config_error("--points must be at least 1".into()));
    }
    if cfg.range < 2 {
        return Err(config_error(format!("coordinate range {} is too small", cfg.range)));
    }
    let band_ok = || {
        if n >= 3 && (2..=n).contains(&k) {
            Ok(())
        } else {
            Err(config_error(format!("band suites need n >= 3 and 2 <= k <= n, got n = {n}, k = {k}")))
        }
    };
    let double_min = |min: usize| {
        if n >= min {
            Ok(())
        } else {
            Err(config_error(format!("{} needs n >= {min}, got n = {n}", suite.name())))
        }
    };
    match (suite, cfg.family) {
        (Suite::Charge, _) => {
            if cfg.grid < 1 || cfg.charge_bound < 1 {
                return Err(config_error("--grid and --charge-bound must be positive".into()));
            }
            Ok(())
        }
        (Suite::Band, _) | (Suite::LogCanonical | Suite::Compatibility, Family::Band) => band_ok(),
        (Suite::LogCanonical | Suite::Identities | Suite::Completeness, Family::Double) => double_min(2),
        (Suite::Identities | Suite::Completeness, Family::Band) => {
            Err(config_error(format!("{} runs on the double only", suite.name())))
        }
        (Suite::Compatibility, Family::Double) => double_min(3),
        (Suite::All, _) => {
            double_min(3)?;
            band_ok()?;
            validate(Suite::Charge, cfg)
        }
    }
}

pub fn checks_for(suite: Suite, cfg: &Config) -> Vec<Check> {
    match (suite, cfg.family) {
        (Suite::Identities, _) => identities(),
        (Suite::LogCanonical, Family::Double) => vec![log_canonical_double()],
        (Suite::LogCanonical, Family::Band) => vec![log_canonical_band()],
        (Suite::Compatibility, Family::Double) => compatibility_double(),
        (Suite::Compatibility, Family::Band) => vec![compatibility_band()],
        (Suite::Completeness, _) => completeness(),
        (Suite::Band, _) => band_suite(),
        (Suite::Charge, _) => charge_suite(),
        (Suite::All, _) => {
            let mut all = identities();
            all.push(log_canonical_double());
            all.push(log_canonical_band());
            all.extend(compatibility_double());
            all.push(compatibility_band());
            all.extend(completeness());
            all.extend(band_suite());
            all.extend(charge_suite());
            all
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &Config) -> Result<VerificationReport, CliError> {
    validate(suite, cfg)?;
    let records = run_checks(cfg, &checks_for(suite, cfg));
    Ok(VerificationReport::new(suite.name(), cfg.parameters(), records))
}

// Encoders.

fn verdict_json(v: &IdentityVerdict) -> (bool, Option<Value>, Value) {
    match v {
        IdentityVerdict::EqualCertified => (true, None, json!({ "method": "symbolic expansion" })),
        IdentityVerdict::EqualProbabilistic { trials, failure_bound, resamples } => (
            true,
            None,
            json!({ "method": "random evaluation", "trials": trials, "failure_bound": q_json(failure_bound), "resamples": resamples }),
        ),
        IdentityVerdict::Unequal { witness, f_value, g_value } => (
            false,
            Some(json!({ "point": point_json(witness), "left": q_json(f_value), "right": q_json(g_value) })),
            json!({ "method": "random evaluation" }),
        ),
    }
}

fn ledger_row_json(point: usize, r: &LedgerRow) -> Value {
    json!({ "point": point, "index": [r.index.0, r.index.1], "expected": q_json(&r.expected), "actual": q_json(&r.actual) })
}

fn compat_failure_json(f: &CompatFailure, seed: &GeneralizedSeed) -> Value {
    let label = |v: usize| seed.quiver.vertex(v).label.clone();
    match f {
        CompatFailure::OffDiagonal { i, j, point, value } => {
            json!({ "kind": "off-diagonal", "x": label(*i), "y": label(*j), "point": point, "value": q_json(value) })
        }
        CompatFailure::Diagonal { j, point, value, expected } => {
            json!({ "kind": "diagonal", "vertex": label(*j), "point": point, "value": q_json(value), "expected": q_json(expected) })
        }
        CompatFailure::Casimir { what, with, point, value } => {
            json!({ "kind": "casimir", "function": what, "with": label(*with), "point": point, "value": q_json(value) })
        }
    }
}

fn compat_outcome(r: &CompatReport, seed: &GeneralizedSeed) -> Outcome {
    let diagonal: BTreeMap<String, Value> =
        r.diagonal.iter().map(|(j, v)| (seed.quiver.vertex(*j).label.clone(), q_json(v))).collect();
    Outcome::new(r.passed())
        .witness(r.failures.first().map(|f| compat_failure_json(f, seed)))
        .values(json!({ "lambda": r.lambda.as_ref().map(q_json), "diagonal": diagonal, "failures": r.failures.len() }))
}

fn omega_outcome(omega: &LogCanonicity, members: Vec<String>) -> Outcome {
    match omega {
        LogCanonicity::Constant(m) => Outcome::new(true).values(json!({
            "members": members,
            "omega": matrix_json(m),
            "half_integers": poisson::in_half_integers(m),
        })),
        LogCanonicity::NotConstant { i, j, point, first, other } => Outcome::new(false).witness(Some(json!({
            "pair": [members[*i], members[*j]],
            "point": point,
            "first": q_json(first),
            "other": q_json(other),
        }))),
    }
}

fn labels(seed: &GeneralizedSeed) -> Vec<String> {
    seed.quiver.vertices().iter().map(|v| format!("{} {}", v.label, seed.names[v.id])).collect()
}

// Suites.

fn identities() -> Vec<Check> {
    vec![
        check("identities.kappa", "phi_l(X, sY) = s^kappa_l phi_l(X, Y)", |cfg, rng| {
            let n = cfg.n;
            let rows: Vec<KappaRow> = double::kappa_check(n, cfg.points, cfg.range, rng)?;
            let bad = rows.iter().find(|r| !r.holds());
            let witness = bad.map(|r| {
                let (p, s) = &r.failures[0];
                json!({ "l": r.l, "kappa": r.kappa, "point": point_json(p), "s": q_json(s) })
            });
            let kappas: Vec<i64> = rows.iter().map(|r| r.kappa).collect();
            Ok(Outcome::new(bad.is_none()).witness(witness).values(json!({ "kappa": kappas })))
        }),
        check("identities.kappa-steps", "kappa_k - kappa_{k+1} = 1 exactly when lambda(k) = mu(k)", |cfg, _| {
            let n = cfg.n;
            let bad = (1..=double::big_n(n)).find(|&k| {
                let (lambda, _) = double::lambda_rho(n, k);
                let (mu, _) = double::mu_sigma(n, k);
                let (a, b) = (double::kappa(n, k), double::kappa(n, k + 1));
                !((lambda == mu && a == b + 1) || (lambda + 1 == mu && a == b))
            });
            Ok(Outcome::new(bad.is_none()).witness(bad.map(|k| json!({ "k": k }))))
        }),
        check("identities.special-exchange", "exchange polynomial at (2,1) = det of the shifted pencil", |cfg, rng| {
            if cfg.n < 3 {
                return Ok(Outcome::excluded("the seed on the double needs n >= 3"));
            }
            let seed = double::build_seed_bar(cfg.n)?;
            let k = seed.find(&double::grid_label(2, 1)).expect("special vertex");
            let v = functions_equal(&seed.exchange_polynomial(k)?, &double::long_identity_rhs(cfg.n)?, &cfg.identity(), rng)?;
            let (ok, w, vals) = verdict_json(&v);
            Ok(Outcome::new(ok).witness(w).values(vals))
        }),
        check("identities.trailing-phi", "phi_{N-s+1} = g_{n-s+1,n-s+1}, s = 1..n-1", |cfg, rng| {
            let n = cfg.n;
            let phis = double::phi_functions(n);
            let nn = double::big_n(n);
            for s in 1..n {
                let i = double::trailing_phi_g_index(n, s);
                let v = functions_equal(&phis[nn - s], &double::g_function(n, i, i)?, &cfg.identity(), rng)?;
                if let (false, w, _) = verdict_json(&v) {
                    return Ok(Outcome::new(false).witness(w));
                }
            }
            Ok(Outcome::new(true))
        }),
        check("identities.casimirs", "{c~_i, x} = {c~_i, y} = 0 for every matrix entry", |cfg, rng| {
            let n = cfg.n;
            let p = &cfg.double_points(n, rng)[0];
            for (i, c) in double::c_tilde_functions(n).iter().enumerate() {
                for coord in Coord::all(n) {
                    let v = poisson::bracket(c, &RegularFunction::entry(n, coord), p)?;
                    if v != Q::from_integer(0.into()) {
                        let w = json!({ "i": i + 1, "entry": coord.to_string(), "value": q_json(&v), "point": point_json(p) });
                        return Ok(Outcome::new(false).witness(Some(w)));
                    }
                }
            }
            Ok(Outcome::new(true))
        }),
    ]
}

fn log_canonical_double() -> Check {
    check("log-canonical.double", "{f_i, f_j} / (f_i f_j) constant on the whole family", |cfg, rng| {
        let fam = DoubleFamily::new(cfg.n)?;
        let members = fam.members();
        let funcs: Vec<RegularFunction> = members.iter().map(|&m| fam.get(m).clone()).collect();
        let omega = poisson::log_canonicity_matrix(&funcs, &cfg.double_points(cfg.n, rng))?;
        Ok(omega_outcome(&omega, members.iter().map(Member::to_string).collect()))
    })
}

fn log_canonical_band() -> Check {
    check("log-canonical.band", "{f_i, f_j} / (f_i f_j) constant on the band family, bracket restricted to the band", |cfg, rng| {
        let (k, n) = (cfg.k, cfg.n);
        let seed = band::build_band_seed(k, n)?;
        let mask = band::band_mask(k, n);
        let pts = cfg.band_points(k, n, rng)?;
        let mats = pts.iter().map(|p| poisson::omega_at(&seed.cluster, &p.to_point(), Some(&mask))).collect::<Result<Vec<_>, _>>()?;
        Ok(omega_outcome(&poisson::compare_omegas(&mats), labels(&seed)))
    })
}

fn compatibility_double() -> Vec<Check> {
    vec![
        check("compatibility.double", "{x_i, y_j} / (x_i y_j) = lambda d_j delta_ij; Casimir monomials commute", |cfg, rng| {
            let seed = double::build_seed_bar(cfg.n)?;
            let r = poisson::compatibility_check(&seed, &cfg.double_points(cfg.n, rng), None)?;
            Ok(compat_outcome(&r, &seed))
        }),
        check("compatibility.weights", "left and right toric weights of phi, g, h match the weight table", |cfg, rng| {
            let n = cfg.n;
            let fam = DoubleFamily::new(n)?;
            let base = &sample_points(n, 1, 1000, rng)[0];
            let mut checked = 0;
            for m in fam.members() {
                let Some(expected) = double::expected_weights(n, m) else { continue };
                let found = poisson::extract_weights(fam.get(m), base)?;
                checked += 1;
                if found != expected {
                    let w = json!({ "member": m.to_string(), "expected": [expected.left, expected.right], "found": [found.left, found.right] });
                    return Ok(Outcome::new(false).witness(Some(w)));
                }
            }
            Ok(Outcome::new(true).values(json!({ "members_checked": checked })))
        }),
        check("compatibility.y-weights", "every y-variable has zero left and right weights", |cfg, rng| {
            let seed = double::build_seed_bar(cfg.n)?;
            let base = &sample_points(cfg.n, 1, 1000, rng)[0];
            let bad = poisson::y_weight_zero_check(&seed, base)?;
            let w = bad.first().map(|(v, t)| json!({ "vertex": seed.quiver.vertex(*v).label, "left": t.left, "right": t.right }));
            Ok(Outcome::new(bad.is_empty()).witness(w).values(json!({ "y_variables": seed.mutable_vertices().len() })))
        }),
    ]
}

fn compatibility_band() -> Check {
    check("compatibility.band", "{x_i, y_j} / (x_i y_j) = lambda d_j delta_ij on the band seed", |cfg, rng| {
        let (k, n) = (cfg.k, cfg.n);
        let seed = band::build_band_seed(k, n)?;
        let pts: Vec<Point> = cfg.band_points(k, n, rng)?.iter().map(BandPoint::to_point).collect();
        let r = poisson::compatibility_check(&seed, &pts, Some(&band::band_mask(k, n)))?;
        Ok(compat_outcome(&r, &seed))
    })
}

fn certificate_outcome(certs: &[EliminationCertificate]) -> Outcome {
    let bad = certs.iter().enumerate().find(|(_, c)| !c.passed());
    let witness = bad.map(|(t, c)| match c.ledger.iter().find(|r| !r.holds()) {
        Some(r) => ledger_row_json(t, r),
        None => json!({ "point": t, "consistent": c.consistent, "unit_diagonal": c.unit_diagonal() }),
    });
    Outcome::new(bad.is_none()).witness(witness).values(json!({ "rows_per_point": certs.first().map_or(0, |c| c.ledger.len()) }))
}

fn completeness() -> Vec<Check> {
    vec![
        check("completeness.tall-ledger", "trailing minors of the stacked matrix are ratios of phi", |cfg, rng| {
            let certs = cfg.double_points(cfg.n, rng).iter().map(|p| completeness::build_g(cfg.n, p)).collect::<Result<Vec<_>, _>>()?;
            Ok(certificate_outcome(&certs))
        }),
        check("completeness.long-ledger", "trailing minors of the concatenated matrix are ratios of phi", |cfg, rng| {
            let certs = cfg.double_points(cfg.n, rng).iter().map(|p| completeness::build_h(cfg.n, p)).collect::<Result<Vec<_>, _>>()?;
            Ok(certificate_outcome(&certs))
        }),
        check("completeness.denominators", "entries of G and H have the predicted denominators", |cfg, rng| {
            let n = cfg.n;
            for (t, p) in sample_points(n, cfg.points, 1000, rng).iter().enumerate() {
                let (g, h) = (completeness::build_g(n, p)?, completeness::build_h(n, p)?);
                if !completeness::g_denominator_check(n, p, &g)? || !completeness::h_denominator_check(n, p, &h)? {
                    return Ok(Outcome::new(false).witness(Some(json!({ "point": t }))));
                }
            }
            Ok(Outcome::new(true))
        }),
        check("completeness.first-row", "the first row of X is recovered and det Z / phi_1 is constant", |cfg, rng| {
            let systems = cfg.double_points(cfg.n, rng).iter().map(|p| completeness::first_row_solve(cfg.n, p)).collect::<Result<Vec<_>, _>>()?;
            let ratios: Vec<Value> = systems.iter().map(|s| q_json(&s.ratio)).collect();
            let ok = systems.iter().all(|s| s.recovered) && systems.windows(2).all(|w| w[0].ratio == w[1].ratio);
            Ok(Outcome::new(ok).values(json!({ "ratios": ratios })))
        }),
        check("completeness.first-row-symbolic", "det Z = const * phi_1 as polynomials", |cfg, rng| {
            if cfg.n != 2 {
                return Ok(Outcome::excluded("symbolic expansion of det Z is run for n = 2 only"));
            }
            let kappa = completeness::first_row_symbolic(2, cfg.term_limit)?;
            let sampled = completeness::first_row_solve(2, &cfg.double_points(2, rng)[0])?.ratio;
            let ok = kappa.as_ref() == Some(&sampled);
            Ok(Outcome::new(ok).values(json!({ "constant": kappa.as_ref().map(q_json), "sampled": q_json(&sampled) })))
        }),
        check("completeness.one-step-regularity", "every one-step mutation of the seed is a polynomial", |cfg, _| {
            if cfg.n != 3 {
                return Ok(Outcome::excluded("symbolic division is run on the n = 3 seed only"));
            }
            Ok(regularity_outcome(&double::build_seed_bar(3)?, cfg.term_limit))
        }),
        check("completeness.notequiv", "eight mutations on the n = 4 seed produce the five displayed minors", |cfg, rng| {
            if cfg.n != 4 {
                return Ok(Outcome::excluded("the mutation sequence is defined on the n = 4 seed"));
            }
            let res = completeness::notequiv_sequence_check(&cfg.identity(), rng)?;
            let bad = res.iter().find(|r| !r.verdict.holds());
            let names: Vec<&str> = res.iter().map(|r| r.name.as_str()).collect();
            let w = bad.map(|r| json!({ "variable": r.name, "detail": verdict_json(&r.verdict).1 }));
            Ok(Outcome::new(bad.is_none()).witness(w).values(json!({ "variables": names })))
        }),
    ]
}

pub fn regularity_outcome(seed: &GeneralizedSeed, term_limit: usize) -> Outcome {
    match completeness::one_step_regularity(seed, term_limit) {
        Ok(rows) => {
            let terms: BTreeMap<String, Value> = rows
                .iter()
                .map(|r| (r.label.clone(), r.outcome.as_ref().map_or_else(|e| json!(e.to_string()), |t| json!(t))))
                .collect();
            Outcome::new(rows.iter().all(|r| r.certified())).values(json!({ "terms": terms }))
        }
        Err(e) => Outcome::new(false).witness(Some(json!({ "error": e.to_string() }))),
    }
}

fn named_ledger_outcome(ledgers: &[(usize, band::NamedLedger)]) -> Outcome {
    let bad = ledgers.iter().find(|(_, l)| !l.passed());
    let witness = bad.map(|(t, l)| {
        let r = l.rows.iter().find(|r| !r.holds()).expect("failing row");
        json!({ "ledger": l.name, "row": ledger_row_json(*t, r) })
    });
    let mut excluded: BTreeMap<String, Vec<[usize; 2]>> = BTreeMap::new();
    let mut rows: BTreeMap<String, usize> = BTreeMap::new();
    for (t, l) in ledgers {
        if *t == 0 {
            *rows.entry(l.name.clone()).or_default() += l.rows.len();
            if !l.excluded.is_empty() {
                excluded.insert(l.name.clone(), l.excluded.iter().map(|&(a, b)| [a, b]).collect());
            }
        }
    }
    Outcome::new(bad.is_none()).witness(witness).values(json!({ "rows_per_point": rows, "excluded_rows": excluded }))
}

fn ledgers_at(
    points: &[BandPoint],
    f: impl Fn(&BandPoint) -> Result<Vec<band::NamedLedger>, Error>,
) -> Result<Vec<(usize, band::NamedLedger)>, Error> {
    let mut out = Vec::new();
    for (t, p) in points.iter().enumerate() {
        out.extend(f(p)?.into_iter().map(|l| (t, l)));
    }
    Ok(out)
}

fn band_suite() -> Vec<Check> {
    vec![
        check("band.structure", "(k+1)n functions; quiver vertex and edge counts", |cfg, _| {
            let (k, n) = (cfg.k, cfg.n);
            let (q, members) = band::build_band_quiver(k, n)?;
            let count = |kind| q.vertices().iter().filter(|v| v.kind == kind).count();
            let (mutable, frozen, isolated) = (count(VertexKind::Mutable), count(VertexKind::Frozen), count(VertexKind::Isolated));
            let ok = members.len() == (k + 1) * n
                && mutable == (k - 1) * (n - 1)
                && frozen == 2 * n
                && isolated == k - 1
                && !q.has_two_cycle()
                && q.isolated_vertices_are_isolated();
            Ok(Outcome::new(ok).values(json!({
                "functions": members.len(), "mutable": mutable, "frozen": frozen, "isolated": isolated, "edges": q.edge_count(),
            })))
        }),
        check("band.factorization", "on L_nn: phi_i = phi~_i phi_{(n-1)^2+1}, g_jj and h_jj are products of band entries", |cfg, rng| {
            let pts = cfg.band_points(cfg.n, cfg.n, rng)?;
            Ok(named_ledger_outcome(&ledgers_at(&pts, band::factorization_check)?))
        }),
        check("band.induction", "phi~ on L_{k-1,n} factor through phi~ on L_kn, k = 3..n", |cfg, rng| {
            let mut all = Vec::new();
            for k in 3..=cfg.n {
                all.extend(ledgers_at(&cfg.band_points(k - 1, cfg.n, rng)?, band::induction_check)?);
            }
            Ok(named_ledger_outcome(&all))
        }),
        check("band.submanifold", "brackets of band entries vanish off the band", |cfg, rng| {
            for p in cfg.band_points(cfg.k, cfg.n, rng)? {
                if let Some((a, b)) = band::submanifold_violations(&p).first() {
                    return Ok(Outcome::new(false).witness(Some(json!({ "pair": [a.to_string(), b.to_string()] }))));
                }
            }
            Ok(Outcome::new(true))
        }),
        check("band.poisson", "band family is log-canonical and the band seed is compatible", |cfg, rng| {
            let (k, n) = (cfg.k, cfg.n);
            let r = band::band_poisson_check(k, n, &cfg.band_points(k, n, rng)?)?;
            let seed = band::build_band_seed(k, n)?;
            let compat = compat_outcome(&r.compat, &seed);
            let ok = r.omega.is_constant() && compat.status == Status::Pass;
            let witness = match &r.omega {
                LogCanonicity::NotConstant { i, j, point, .. } => Some(json!({ "omega_pair": [i, j], "point": point })),
                LogCanonicity::Constant(_) => compat.witness,
            };
            Ok(Outcome::new(ok).witness(witness).values(json!({ "omega_constant": r.omega.is_constant(), "compatibility": compat.values })))
        }),
        check("band.omega-recursion", "omega of phi~ on L_{k-1,n} is the lower block of omega on L_kn", |cfg, rng| {
            let rows = band::omega_recursion_check(cfg.n, cfg.points, cfg.range, rng)?;
            let bad = rows.iter().find(|r| !r.passed());
            let w = bad.map(|r| json!({ "k": r.k, "failures": r.failures.len(), "not_constant": r.not_constant }));
            Ok(Outcome::new(bad.is_none()).witness(w).values(json!({ "levels": rows.iter().map(|r| r.k).collect::<Vec<_>>() })))
        }),
        check("band.y-coincidence", "y-variables of the band seed on L_nn agree with those of the double", |cfg, rng| {
            let mut compared = 0;
            let mut excluded = 0;
            for (t, p) in cfg.band_points(cfg.n, cfg.n, rng)?.iter().enumerate() {
                let rows = band::y_coincidence_check(p)?;
                if let Some(r) = rows.iter().find(|r| !r.holds()) {
                    let w = json!({ "point": t, "kind": r.kind, "index": r.index, "band": q_json(&r.band), "expected": r.expected.as_ref().map(q_json) });
                    return Ok(Outcome::new(false).witness(Some(w)));
                }
                if t == 0 {
                    compared = rows.iter().filter(|r| r.expected.is_some()).count();
                    excluded = rows.len() - compared;
                }
            }
            Ok(Outcome::new(compared > 0).values(json!({ "compared": compared, "excluded": excluded })))
        }),
        check("band.conventions", "a unique index convention makes every tall and long ledger row an identity", |cfg, rng| {
            let pts = cfg.band_points(cfg.k, cfg.n, rng)?;
            let (tall, long) = (band::resolve_tall(&pts)?, band::resolve_long(&pts)?);
            let show = |c: Option<String>, rows: usize| if rows == 0 { json!("no ledger rows") } else { json!(c) };
            Ok(Outcome::new(tall.passed() && long.passed()).values(json!({
                "tall": show(tall.chosen().map(|c| c.to_string()), tall.rows),
                "long": show(long.chosen().map(|c| c.to_string()), long.rows),
                "tall_candidates_passing": tall.passing.len(),
                "long_candidates_passing": long.passing.len(),
            })))
        }),
        check("band.psi", "trailing minors of the band long matrix are psi-ratios", |cfg, rng| {
            let pts = cfg.band_points(cfg.k, cfg.n, rng)?;
            Ok(named_ledger_outcome(&ledgers_at(&pts, |p| band::psi_check(p, &band::band_long(p)?.assembled))?))
        }),
        check("band.denominators", "entries of G and H on the band have the predicted denominators", |cfg, rng| {
            let tall = band::TallConvention { x_first_row: 2 };
            for (t, p) in cfg.band_points(cfg.k, cfg.n, rng)?.iter().enumerate() {
                let (g, h) = (band::band_tall(p, tall)?, band::band_long(p)?);
                if !band::band_denominator_check(p, &g.matrix, &h.matrix)? {
                    return Ok(Outcome::new(false).witness(Some(json!({ "point": t }))));
                }
            }
            Ok(Outcome::new(true))
        }),
        check("band.one-step-regularity", "every one-step mutation of the band seed is a polynomial", |cfg, _| {
            if cfg.n > 3 {
                return Ok(Outcome::excluded("symbolic division is run for n <= 3 only"));
            }
            Ok(regularity_outcome(&band::build_band_seed(cfg.k, cfg.n)?, cfg.term_limit))
        }),
    ]
}

fn state_json(s: ChargeState) -> Value {
    json!([s.alpha, s.beta, s.gamma])
}

fn reach_json(r: &Reachability) -> Value {
    match r {
        Reachability::Reachable { path } => json!({ "reachable": true, "path": path }),
        Reachability::Unreachable { explored } => json!({ "reachable": false, "explored": explored }),
    }
}

fn charge_suite() -> Vec<Check> {
    vec![
        check("charge.boundary", "move tables of adjacent sign regions agree on shared boundaries", |cfg, _| {
            let bad = charge::boundary_check(cfg.grid);
            let w = bad.first().map(|b| json!({ "state": state_json(b.state), "vertex": b.vertex }));
            Ok(Outcome::new(bad.is_empty()).witness(w).values(json!({ "disagreements": bad.len() })))
        }),
        check("charge.move-symmetry", "every move is undone by some move", |cfg, _| {
            let bad = charge::move_symmetry_failures(cfg.grid);
            let w = bad.first().map(|(s, v)| json!({ "state": state_json(*s), "vertex": v }));
            Ok(Outcome::new(bad.is_empty()).witness(w))
        }),
        check("charge.census", "node types [increase, preserve, decrease] over the grid", |cfg, _| {
            let census = charge::census(cfg.grid);
            let side = 2 * cfg.grid + 1;
            let total: u64 = census.values().sum();
            let table: BTreeMap<String, u64> = census.iter().map(|(t, c)| (t.to_string(), *c)).collect();
            let ok = total == (side * side * side - 1) as u64;
            Ok(Outcome::new(ok).values(json!({ "states": total, "types": table })))
        }),
        check("charge.case-analysis", "stated charge changes, allowed types per case, no [1,1,1] peak", |cfg, _| {
            let bad = charge::peak_argument_check(cfg.grid);
            let w = bad.first().map(|f| json!(format!("{f:?}")));
            Ok(Outcome::new(bad.is_empty()).witness(w).values(json!({ "counterexamples": bad.len() })))
        }),
        check("charge.listed-111", "listed conditions for [1,1,1] in cases 2, 3, 4", |cfg, _| {
            let ex = charge::listed_111_exceptions(cfg.grid);
            let off_pattern = ex.iter().find(|(s, t)| !(s.alpha == 0 && s.beta == 0 && *t == NodeType(1, 2, 0)));
            if let Some((s, t)) = off_pattern {
                return Ok(Outcome::new(false).witness(Some(json!({ "state": state_json(*s), "type": t.to_string() }))));
            }
            let reason = "the case 4 condition as listed also admits alpha = beta = 0, where the type is [1,2,0]";
            Ok(Outcome::excluded(reason).values(json!({ "reason": reason, "states": ex.len() })))
        }),
        check("charge.separated", "(0,1,0) cannot reach (0,-1,0) within the charge bound", |cfg, _| {
            let (a, b) = (ChargeState::new(0, 1, 0).unwrap(), ChargeState::new(0, -1, 0).unwrap());
            let r = charge::bounded_reachability(a, b, cfg.charge_bound);
            Ok(Outcome::new(!r.is_reachable()).values(reach_json(&r)))
        }),
        check("charge.adjacent", "(0,1,0) and (1,0,0) are one move apart at charge 1", |_, _| {
            let (a, b) = (ChargeState::new(0, 1, 0).unwrap(), ChargeState::new(1, 0, 0).unwrap());
            let (there, back) = (charge::bounded_reachability(a, b, 1), charge::bounded_reachability(b, a, 1));
            Ok(Outcome::new(there.is_reachable() && back.is_reachable()).values(json!({ "forward": reach_json(&there), "back": reach_json(&back) })))
        }),
    ]
}
