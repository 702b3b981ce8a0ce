//! The self-check scoreboard run by `liftlab verify`.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::counting::{
    all_lifts_congruence_gamma0, all_lifts_congruence_gamma1, count_codim1_avoiding,
    count_congruence_lifts_engine, count_congruence_lifts_formula, SubspaceCountMethod,
};
use crate::crt::{crt_combine, crt_split};
use crate::error::Result;
use crate::factor::factorize;
use crate::group::{closure, sl2_order, subgroup_by_membership};
use crate::kind::GroupKind;
use crate::lifts::{
    classify_all, lift_generators, propagate_witness, verify_witness, CharacterRoute, Classification,
    LiftAction, LiftContext, SignCharacter,
};
use crate::presentation::{
    build_coset_action, cusp_widths, elliptic_counts, farey_symbol, general_level,
    generators_from_symbol, index_formula, GeneratorType,
};
use crate::quotient::two_quotient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub max_n: u32,
    /// Flip the first free sign on the closure side of the route comparison.
    pub tamper: bool,
    /// Characters sampled per group when `2^r` exceeds the exhaustive cap.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_n: 24, tamper: false, samples: 16, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scoreboard {
    pub max_n: u32,
    pub checks: Vec<CheckResult>,
}

impl Scoreboard {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Scoreboard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {:<28} {} cases", c.name, c.cases)?;
            for msg in c.failures.iter().take(5) {
                writeln!(f, "       {msg}")?;
            }
            if c.failures.len() > 5 {
                writeln!(f, "       ... {} more", c.failures.len() - 5)?;
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Collects case outcomes for one named check.
struct Check {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn outcome<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{label}: {e}"));
                None
            }
        }
    }

    fn merge(&mut self, other: Check) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_string(),
            passed: self.failures.is_empty(),
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// Levels up to `max_n` whose engine modulus fits the cap.
fn levels(opts: &SuiteOptions, config: &EngineConfig) -> Vec<u32> {
    (1..=opts.max_n).filter(|&n| config.engine_modulus(n).is_ok()).collect()
}

const PRESENTED: [GroupKind; 2] = [GroupKind::Gamma0, GroupKind::Gamma1];

pub fn run_suite(opts: &SuiteOptions, config: &EngineConfig) -> Scoreboard {
    let ns = levels(opts, config);
    let checks = vec![
        count_agreement(&ns, config),
        gamma0_quotient_structure(&ns, config),
        group_properties(&ns, opts, config),
        presentations(&ns, config),
        small_level_table(&ns, config),
        classification(&ns, config),
        route_agreement(&ns, opts, config),
        cover_kernel_property(&ns, config),
        propagation(&ns, config),
        hyperplane_count(),
    ];
    Scoreboard { max_n: opts.max_n, checks }
}

fn count_agreement(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("count formula = engine");
    for kind in [GroupKind::Gamma0, GroupKind::Gamma1, GroupKind::Gamma] {
        for &n in ns {
            let label = format!("{kind}({n})");
            let f = check.outcome(&label, count_congruence_lifts_formula(kind, n));
            let e = check.outcome(&label, count_congruence_lifts_engine(kind, n, config));
            if let (Some(f), Some(e)) = (f, e) {
                check.case(f.count == e.count, || format!("{label}: formula {} engine {}", f.count, e.count));
            }
        }
    }
    check.finish()
}

fn gamma0_quotient_structure(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("gamma0 2-quotient");
    for &n in ns {
        let label = format!("gamma0({n})");
        let (Some(prof), Some(rep)) = (
            check.outcome(&label, factorize(n.into())),
            check.outcome(&label, count_congruence_lifts_engine(GroupKind::Gamma0, n, config)),
        ) else {
            continue;
        };
        let data = rep.engine.expect("engine reports carry data");
        let dim = (prof.s as usize + 1).min(4) + prof.t();
        check.case(data.dim2 == dim, || format!("{label}: dim2 {} expected {dim}", data.dim2));
        check.case(data.minus_one_in_group, || format!("{label}: -1 missing"));
        let in_squares = prof.s <= 1 && !prof.any_odd_prime_3_mod_4();
        check.case(data.minus_one_in_squares == in_squares, || {
            format!("{label}: -1 in G'G^2 is {}, expected {in_squares}", data.minus_one_in_squares)
        });
    }
    check.finish()
}

fn group_properties(ns: &[u32], opts: &SuiteOptions, config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("group engine invariants");
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for &n in ns {
        let m = 2 * n;
        for kind in [GroupKind::Gamma0, GroupKind::Gamma1, GroupKind::Gamma] {
            let label = format!("{kind}({n}) mod {m}");
            let Some(g) = check.outcome(&label, subgroup_by_membership(kind, n, m, config)) else {
                continue;
            };
            check.case(sl2_order(m) % g.order() as u64 == 0, || format!("{label}: Lagrange"));
            let Some(q) = check.outcome(&label, two_quotient(&g)) else { continue };
            let ratio = g.order() / q.kernel().order();
            check.case(ratio == 1 << q.dim2(), || format!("{label}: quotient order {ratio}"));
            let els = g.elements();
            for _ in 0..8 {
                let x = els[rng.gen_range(0..els.len())];
                let y = els[rng.gen_range(0..els.len())];
                let k = q.kernel().elements()[rng.gen_range(0..q.kernel().order())];
                check.case(q.kernel().contains(&x.mul(&k).mul(&x.inverse())), || format!("{label}: normality"));
                let hom = q.coordinates(&x.mul(&y)) == Some(q.coordinates(&x).unwrap_or(0) ^ q.coordinates(&y).unwrap_or(0));
                check.case(hom, || format!("{label}: coordinates not additive"));
            }
            // a random 2-generated subgroup obeys Lagrange inside g
            let gens = [els[rng.gen_range(0..els.len())], els[rng.gen_range(0..els.len())]];
            if let Some(h) = check.outcome(&label, closure(&gens, m)) {
                check.case(g.order() % h.order() == 0 && h.is_subgroup_of(&g), || format!("{label}: subgroup"));
            }
        }
        if let Some(prof) = check.outcome("factorize", factorize(n.into())) {
            let g = subgroup_by_membership(GroupKind::Full, 1, m, config);
            if let Some(g) = check.outcome("SL2", g) {
                for _ in 0..8 {
                    let x = g.elements()[rng.gen_range(0..g.order())];
                    let back = crt_split(&x, &prof).and_then(|parts| crt_combine(&parts));
                    check.case(back.as_ref() == Ok(&x), || format!("CRT round trip failed for {x}"));
                }
            }
        }
    }
    check.finish()
}

fn presentations(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("presentations");
    for kind in PRESENTED {
        for &n in ns {
            let label = format!("{kind}({n})");
            let Some(action) = check.outcome(&label, build_coset_action(kind, n, config)) else { continue };
            let d = action.degree();
            if let Some(idx) = check.outcome(&label, index_formula(kind, n)) {
                check.case(idx == d as u64, || format!("{label}: orbit {d}, formula {idx}"));
            }
            let (e2, e3) = elliptic_counts(&action);
            check.case((d as i64 - 3 * e2 as i64 - 4 * e3 as i64) % 6 == 0, || format!("{label}: d - 3e2 - 4e3"));
            check.case(cusp_widths(&action).iter().sum::<usize>() == d, || format!("{label}: widths"));
            check.case(general_level(&action) == u64::from(n), || format!("{label}: general level"));
            let Some(sym) = check.outcome(&label, farey_symbol(kind, n, config)) else { continue };
            check.case(sym.index() == d && sym.e2() == e2 && sym.e3() == e3, || format!("{label}: Farey data"));
            check.case((0..sym.sides()).all(|i| sym.side_matrix(i).det() == 1), || format!("{label}: unimodular"));
            let Some(gens) = check.outcome(&label, generators_from_symbol(&sym)) else { continue };
            check.case(gens.generators.len() == e2 + e3 + gens.r, || format!("{label}: generator count"));
            for g in &gens.generators {
                let t = g.matrix.trace().unwrap_or(i64::MAX);
                let ok = kind.contains_projective(n, &g.matrix)
                    && match g.kind {
                        GeneratorType::Even => t == 0,
                        GeneratorType::Odd => t.abs() == 1,
                        GeneratorType::Free => t.abs() >= 2,
                    };
                check.case(ok, || format!("{label}: generator {}", g.matrix));
            }
            for m in [n, 2 * n] {
                let mut red: Vec<_> = gens.matrices().filter_map(|x| x.reduce(m).ok()).collect();
                red.push(crate::matrix::ResidueMatrix::minus_one(m));
                let full = subgroup_by_membership(kind, n, m, config).map(|g| g.with_minus_one());
                if let (Some(h), Some(full)) = (check.outcome(&label, closure(&red, m)), check.outcome(&label, full)) {
                    check.case(h.order() == full.order(), || format!("{label}: generators miss mod {m}"));
                }
            }
        }
    }
    check.finish()
}

fn small_level_table(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("gamma0 table N=4,6,8,9,16");
    let table = [(4, 6, 2, true), (6, 12, 3, false), (8, 12, 3, true), (9, 12, 3, false), (16, 24, 5, false)];
    for (n, index, r, all) in table {
        if !ns.contains(&n) {
            continue;
        }
        let label = format!("gamma0({n})");
        if let Some(rep) = check.outcome(&label, classify_all(GroupKind::Gamma0, n, config)) {
            let got = (rep.e2, rep.e3, rep.index, rep.r, rep.all_congruence());
            check.case(got == (0, 0, index, r, all), || format!("{label}: got {got:?}"));
        }
    }
    check.finish()
}

fn classification(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("classification vs predicates");
    let cases: Vec<(GroupKind, u32)> = PRESENTED.iter().flat_map(|&k| ns.iter().map(move |&n| (k, n))).collect();
    let parts: Vec<Check> = cases
        .par_iter()
        .map(|&(kind, n)| {
            let mut c = Check::new("");
            let label = format!("{kind}({n})");
            let Some(rep) = c.outcome(&label, classify_all(kind, n, config)) else { return c };
            if let Some(f) = c.outcome(&label, count_congruence_lifts_formula(kind, n)) {
                c.case(rep.congruence == f.count, || format!("{label}: {} congruence, formula {}", rep.congruence, f.count));
            }
            let pred = match kind {
                GroupKind::Gamma0 => all_lifts_congruence_gamma0(n),
                _ => all_lifts_congruence_gamma1(n),
            };
            if let Some(pred) = c.outcome(&label, pred) {
                c.case(rep.all_congruence() == pred, || {
                    format!("{label}: computed all-congruence {} but predicate {pred}", rep.all_congruence())
                });
            }
            c
        })
        .collect();
    for p in parts {
        check.merge(p);
    }
    check.finish()
}

fn route_agreement(ns: &[u32], opts: &SuiteOptions, config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("closure = character route");
    for kind in PRESENTED {
        for &n in ns {
            let label = format!("{kind}({n})");
            let Some(gens) = check.outcome(&label, crate::presentation::GeneratorSet::build(kind, n, config)) else {
                continue;
            };
            if gens.e2 > 0 {
                continue;
            }
            let r = gens.r;
            let Some(ctx) = check.outcome(&label, LiftContext::new(gens, config)) else { continue };
            let Some(route) = check.outcome(&label, CharacterRoute::new(&ctx)) else { continue };
            let chars: Vec<SignCharacter> = if r < 64 && (1u64 << r) <= config.exhaustive_lift_cap {
                (0..1u64 << r).map(|b| SignCharacter::from_bits(r, b)).collect()
            } else {
                let mut rng = StdRng::seed_from_u64(opts.seed ^ u64::from(n));
                (0..opts.samples)
                    .map(|_| SignCharacter::from_signs((0..r).map(|_| if rng.gen() { -1 } else { 1 }).collect()))
                    .collect::<Result<_>>()
                    .unwrap_or_default()
            };
            let parts: Vec<Check> = chars
                .par_iter()
                .map(|ch| {
                    let mut c = Check::new("");
                    let closed = if opts.tamper && r > 0 { ch.flipped(0) } else { ch.clone() };
                    if let Some(d) = c.outcome(&label, ctx.classify(&closed)) {
                        let by_route = route.is_congruence(ch);
                        c.case((d.classification == Classification::Congruence) == by_route, || {
                            format!("{label} {:?}: closure {:?}, character route {by_route}", ch.free_signs, d.classification)
                        });
                    }
                    c
                })
                .collect();
            for p in parts {
                check.merge(p);
            }
        }
    }
    check.finish()
}

fn cover_kernel_property(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("lift generators in kernel");
    for kind in PRESENTED {
        for &n in ns.iter().filter(|&&n| n <= 12) {
            let label = format!("{kind}({n})");
            let Some(gens) = check.outcome(&label, crate::presentation::GeneratorSet::build(kind, n, config)) else {
                continue;
            };
            if gens.e2 > 0 || gens.r > 8 {
                continue;
            }
            let Some(cover) = check.outcome(&label, LiftAction::new(&gens, config)) else { continue };
            for bits in 0..1u64 << gens.r {
                let ch = SignCharacter::from_bits(gens.r, bits);
                let Some(co) = check.outcome(&label, cover.cocycle(&ch)) else { continue };
                let Some(lg) = check.outcome(&label, lift_generators(&gens, &ch)) else { continue };
                for g in lg {
                    let ok = co.contains(&g).unwrap_or(false);
                    check.case(ok, || format!("{label} {:?}: {g} has sign -1", ch.free_signs));
                }
            }
        }
    }
    check.finish()
}

fn propagation(ns: &[u32], config: &EngineConfig) -> CheckResult {
    let mut check = Check::new("witness propagation");
    if !ns.contains(&6) {
        return check.finish();
    }
    let Some(parent) = check.outcome("gamma0(6)", classify_all(GroupKind::Gamma0, 6, config)) else {
        return check.finish();
    };
    for (kind, n) in [(GroupKind::Gamma1, 6), (GroupKind::Gamma0, 12), (GroupKind::Gamma0, 18), (GroupKind::Gamma1, 12)] {
        if !ns.contains(&n) {
            continue;
        }
        let label = format!("gamma0(6) -> {kind}({n})");
        if let Some(w) = check.outcome(&label, propagate_witness(&parent, kind, n, config)) {
            check.outcome(&label, verify_witness(&w, config).map(|_| ()));
            check.case(true, String::new);
        }
    }
    check.finish()
}

fn hyperplane_count() -> CheckResult {
    let mut check = Check::new("hyperplanes avoiding v");
    for p in [2u64, 3, 5] {
        for d in 1..=4u32 {
            let f = count_codim1_avoiding(p, d, SubspaceCountMethod::Formula);
            let b = count_codim1_avoiding(p, d, SubspaceCountMethod::BruteForce);
            check.case(f.is_ok() && f == b, || format!("p = {p}, d = {d}: {f:?} vs {b:?}"));
        }
    }
    check.finish()
}
