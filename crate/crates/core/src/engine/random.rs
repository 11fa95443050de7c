//! Randomized seeds and the structural properties every mutation must keep.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{ExchangeString, GeneralizedSeed, LaurentPolynomial, MultiplicityQuiver, TauMonomial, VertexKind};
use crate::exact::{functions_equal, Coord, Evaluator, IdentityConfig, RegularFunction};
use crate::{Error, Rng};

/// Shape of the random seeds drawn by [`random_seed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSeedConfig {
    pub mutable: (usize, usize),
    pub frozen: (usize, usize),
    pub isolated: (usize, usize),
    /// Multiplicities are drawn from `1..=max_d`.
    pub max_d: u32,
    /// Edge multiplicities are drawn from `0..=max_edge`.
    pub max_edge: u32,
}

impl Default for RandomSeedConfig {
    fn default() -> Self {
        RandomSeedConfig { mutable: (2, 5), frozen: (0, 3), isolated: (0, 1), max_d: 3, max_edge: 2 }
    }
}

impl RandomSeedConfig {
    /// Ordinary cluster seeds: every multiplicity is 1.
    pub fn classical() -> Self {
        RandomSeedConfig { max_d: 1, ..Self::default() }
    }
}

/// Smallest `n` with `2n^2 >= count`, so every vertex gets its own entry.
pub fn coordinate_n(count: usize) -> usize {
    let mut n = 1;
    while 2 * n * n < count {
        n += 1;
    }
    n
}

fn coordinate_cluster(len: usize) -> (usize, Vec<RegularFunction>) {
    let n = coordinate_n(len);
    (n, (0..len).map(|i| RegularFunction::entry(n, Coord::from_index(i, n))).collect())
}

/// A seed whose cluster variables are distinct coordinate functions, with
/// random edges (none between two frozen vertices, none at isolated ones),
/// random multiplicities and random string coefficients in the frozen and
/// isolated variables.
pub fn random_seed(cfg: &RandomSeedConfig, rng: &mut Rng) -> GeneralizedSeed {
    let nm = rng.gen_range(cfg.mutable.0..=cfg.mutable.1);
    let nf = rng.gen_range(cfg.frozen.0..=cfg.frozen.1);
    let ni = rng.gen_range(cfg.isolated.0..=cfg.isolated.1);
    let mut q = MultiplicityQuiver::new();
    for i in 0..nm {
        q.add_vertex(alloc::format!("m{i}"), VertexKind::Mutable, rng.gen_range(1..=cfg.max_d));
    }
    for i in 0..nf {
        q.add_vertex(alloc::format!("f{i}"), VertexKind::Frozen, 1);
    }
    for i in 0..ni {
        q.add_vertex(alloc::format!("c{i}"), VertexKind::Isolated, 1);
    }
    for a in 0..nm {
        for b in a + 1..nm + nf {
            let m = rng.gen_range(0..=cfg.max_edge);
            if m > 0 {
                if rng.gen_bool(0.5) {
                    q.add_edge(a, b, m);
                } else {
                    q.add_edge(b, a, m);
                }
            }
        }
    }
    let coeff_vars: Vec<usize> = (nm..nm + nf + ni).collect();
    let mut strings = Vec::new();
    for k in 0..nm {
        let d = q.multiplicity(k);
        let inner = (1..d)
            .map(|_| {
                TauMonomial(
                    coeff_vars.iter().map(|&v| (v, rng.gen_range(0..=1u32))).filter(|&(_, e)| e > 0).collect(),
                )
            })
            .collect();
        strings.push(ExchangeString::with_inner(k, inner));
    }
    let (n, cluster) = coordinate_cluster(q.len());
    let names = q.vertices().iter().map(|v| v.label.clone()).collect();
    GeneralizedSeed::new(n, q, cluster, names, strings).expect("random seed is well formed")
}

/// Same quiver and strings as `seed`, with each cluster variable replaced by
/// its own coordinate function. Expansions in this copy are expansions in the
/// initial cluster of `seed`.
pub fn abstract_copy(seed: &GeneralizedSeed) -> GeneralizedSeed {
    let (n, cluster) = coordinate_cluster(seed.len());
    GeneralizedSeed { n, quiver: seed.quiver.clone(), cluster, names: seed.names.clone(), strings: seed.strings.clone() }
}

/// `prod_{k -> j} x_j^b + prod_{j -> k} x_j^b`, the ordinary exchange
/// binomial, built straight from the edges.
pub fn classical_binomial(seed: &GeneralizedSeed, k: usize) -> RegularFunction {
    let n = seed.n;
    let side = |edges: Vec<(usize, u32)>| RegularFunction::product(n, edges.into_iter().map(|(v, b)| seed.cluster[v].pow(b)));
    side(seed.quiver.out_edges(k)).add(&side(seed.quiver.in_edges(k)))
}

/// Outcome of the property checks on one random seed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessCase {
    pub vertices: usize,
    /// Mutable vertices where `mu_k mu_k` changes the quiver.
    pub quiver_not_involutive: Vec<usize>,
    pub strings_not_involutive: Vec<usize>,
    pub cluster_not_involutive: Vec<usize>,
    /// Steps of the random walk after which a 2-cycle or an edge at an
    /// isolated vertex appeared.
    pub normal_form_broken: Vec<usize>,
    /// Steps after which some string lost `p_0 = p_d = 1`.
    pub ends_broken: Vec<usize>,
    /// Walk steps taken; a walk stops early once edge multiplicities no
    /// longer fit in `u32`.
    pub walk_steps: usize,
    /// Vertices where a `d = 1` exchange differs from the binomial. Empty
    /// when some multiplicity exceeds 1.
    pub binomial_mismatch: Vec<usize>,
    pub classical: bool,
}

impl SoundnessCase {
    pub fn passed(&self) -> bool {
        self.quiver_not_involutive.is_empty()
            && self.strings_not_involutive.is_empty()
            && self.cluster_not_involutive.is_empty()
            && self.normal_form_broken.is_empty()
            && self.ends_broken.is_empty()
            && self.binomial_mismatch.is_empty()
    }
}

/// Run every property on `seed`, including a random walk of up to `walk`
/// steps.
pub fn soundness_case(seed: &GeneralizedSeed, walk: usize, id: &IdentityConfig, rng: &mut Rng) -> Result<SoundnessCase, Error> {
    let mutable = seed.mutable_vertices();
    let classical = mutable.iter().all(|&k| seed.quiver.multiplicity(k) == 1);
    let mut out = SoundnessCase { vertices: seed.len(), classical, ..Default::default() };
    for &k in &mutable {
        let once = seed.mutate(k)?;
        let twice = once.mutate(k)?;
        if twice.quiver != seed.quiver {
            out.quiver_not_involutive.push(k);
        }
        if twice.strings != seed.strings {
            out.strings_not_involutive.push(k);
        }
        if !functions_equal(&twice.cluster[k], &seed.cluster[k], id, rng)?.holds() {
            out.cluster_not_involutive.push(k);
        }
        if classical && !functions_equal(&seed.exchange_polynomial(k)?, &classical_binomial(seed, k), id, rng)?.holds() {
            out.binomial_mismatch.push(k);
        }
    }
    let mut s = seed.clone();
    for step in 0..walk {
        if mutable.is_empty() {
            break;
        }
        let k = mutable[rng.gen_range(0..mutable.len())];
        let quiver = match s.quiver.mutate(k) {
            Ok(q) => q,
            Err(Error::Range(_)) => break,
            Err(e) => return Err(e),
        };
        s = GeneralizedSeed { quiver, strings: mutated_strings(&s, k), ..s };
        out.walk_steps += 1;
        if s.quiver.has_two_cycle() || !s.quiver.isolated_vertices_are_isolated() {
            out.normal_form_broken.push(step);
        }
        if !s.strings.values().all(|p| p.ends_are_one() && p.degree() == s.quiver.multiplicity(p.owner)) {
            out.ends_broken.push(step);
        }
    }
    Ok(out)
}

fn mutated_strings(s: &GeneralizedSeed, k: usize) -> alloc::collections::BTreeMap<usize, ExchangeString> {
    let mut strings = s.strings.clone();
    if let Some(p) = strings.get_mut(&k) {
        *p = p.reversed();
    }
    strings
}

/// A cluster variable that failed the Laurent check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentFailure {
    /// Mutation sequence by vertex label.
    pub sequence: Vec<String>,
    pub reason: Error,
}

/// Summary of [`laurent_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentReport {
    pub variables: usize,
    pub failures: Vec<LaurentFailure>,
}

/// Expand every cluster variable reachable in at most `depth` mutations
/// (no immediate repeats) as a Laurent polynomial in the initial cluster,
/// and require the denominator to involve mutable variables only.
pub fn laurent_check(seed: &GeneralizedSeed, depth: usize, term_limit: usize) -> Result<LaurentReport, Error> {
    let base = abstract_copy(seed);
    let n = base.n;
    let nv = 2 * n * n;
    let mut ev = Evaluator::new(move |c: Coord| LaurentPolynomial::var(nv, c.index(n)));
    ev.set_term_limit(Some(term_limit));
    let mut report = LaurentReport::default();
    let mut frontier: Vec<(Vec<usize>, GeneralizedSeed)> = alloc::vec![(Vec::new(), base)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (seq, s) in &frontier {
            for k in s.mutable_vertices() {
                if seq.last() == Some(&k) {
                    continue;
                }
                let m = s.mutate(k)?;
                let mut path = seq.clone();
                path.push(k);
                report.variables += 1;
                let verdict = ev.eval(&m.cluster[k]).and_then(|l| {
                    let bad = l.denominator().0.iter().enumerate().any(|(v, &e)| e > 0 && !seed.quiver.kind(v).is_mutable());
                    if bad {
                        Err(Error::NotDivisible)
                    } else {
                        Ok(())
                    }
                });
                if let Err(reason) = verdict {
                    let sequence = path.iter().map(|&i| seed.quiver.vertex(i).label.clone()).collect();
                    report.failures.push(LaurentFailure { sequence, reason });
                }
                next.push((path, m));
            }
        }
        frontier = next;
    }
    Ok(report)
}
