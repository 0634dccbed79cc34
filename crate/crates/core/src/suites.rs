//! Named randomized verification suites.
//!
//! Instance `i` of a run with seed `s` draws from a ChaCha8 stream seeded
//! with `splitmix64(s + i)`, so any instance can be replayed alone.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds;
use crate::cohomology::{self, GModule};
use crate::error::{Error, Result};
use crate::kummer::{self, ArborealElement, ArborealGroup};
use crate::matgroup::{self, CartanData, Mat2, MatGroup};
use crate::modulegen::{self, GroupTheoryCase, GroupTheoryParams, Submodule};
use crate::residue::{self, arith, Modulus, Residue};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 10] = [
    "grouptheory-prop",
    "exponent-h1",
    "adelic-good-ell",
    "cm-counterexample",
    "kummer-identity",
    "serre-lifting",
    "zywina-normaliser",
    "lemma-ab",
    "cohen-roots",
    "sl2-squares",
];

#[derive(Debug, Clone, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub seed: u64,
    pub passed: bool,
    pub detail: String,
    pub instance: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub outcomes: Vec<InstanceOutcome>,
    pub statistics: BTreeMap<String, Value>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn instance_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Outcome {
    passed: bool,
    detail: String,
    instance: Value,
    stats: Vec<(&'static str, u64)>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>, instance: Value) -> Self {
        Self {
            passed,
            detail: detail.into(),
            instance,
            stats: vec![],
        }
    }

    fn stat(mut self, key: &'static str, v: u64) -> Self {
        self.stats.push((key, v));
        self
    }
}

type Runner = fn(usize, &mut ChaCha8Rng) -> Result<Outcome>;

fn runner(name: &str) -> Option<Runner> {
    Some(match name {
        "grouptheory-prop" => grouptheory_instance,
        "exponent-h1" => exponent_h1_instance,
        "adelic-good-ell" => adelic_good_ell_instance,
        "cm-counterexample" => cm_instance,
        "kummer-identity" => kummer_identity_instance,
        "serre-lifting" => serre_lifting_instance,
        "zywina-normaliser" => zywina_instance,
        "lemma-ab" => lemma_ab_instance,
        "cohen-roots" => cohen_instance,
        "sl2-squares" => sl2_squares_instance,
        _ => return None,
    })
}

/// Runs `instances` instances of `suite`; results are ordered by index.
pub fn run_suite(suite: &str, seed: u64, instances: usize) -> Result<SuiteReport> {
    let run = runner(suite).ok_or_else(|| Error::InvalidArgument(format!("unknown suite {suite}")))?;
    let results: Vec<(InstanceOutcome, Vec<(&'static str, u64)>)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let o = run(i, &mut rng).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}"), Value::Null));
            (
                InstanceOutcome {
                    index: i,
                    seed: s,
                    passed: o.passed,
                    detail: o.detail,
                    instance: o.instance,
                },
                o.stats,
            )
        })
        .collect();
    let mut statistics: BTreeMap<String, Value> = BTreeMap::new();
    let mut maxima: BTreeMap<&str, u64> = BTreeMap::new();
    for (_, stats) in &results {
        for &(k, v) in stats {
            let e = maxima.entry(k).or_insert(v);
            *e = (*e).max(v);
        }
    }
    for (k, v) in maxima {
        statistics.insert(format!("max_{k}"), json!(v));
    }
    let outcomes: Vec<InstanceOutcome> = results.into_iter().map(|(o, _)| o).collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: suite.to_string(),
        seed,
        instances,
        passed,
        failed: instances - passed,
        outcomes,
        statistics,
    })
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: u64) -> Mat2 {
    loop {
        let m = Mat2::from_u64([rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)], n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random element `≡ Id (mod s)` at level `n`.
fn random_congruent_to_identity(rng: &mut ChaCha8Rng, n: u64, s: u64) -> Mat2 {
    let r = n / s;
    let e = [0, 1, 2, 3].map(|_| rng.random_range(0..r) * s);
    Mat2::from_u64([1 + e[0], e[1], e[2], 1 + e[3]], n)
}

fn descriptor(h: &MatGroup) -> Value {
    serde_json::to_value(h.to_descriptor()).unwrap_or(Value::Null)
}

fn random_vector_with_valuation_at_most(rng: &mut ChaCha8Rng, ell: u64, k: u32, d: u32) -> [u64; 2] {
    let q = ell.pow(k);
    let e = rng.random_range(0..=d.min(k - 1));
    let s = ell.pow(e);
    let unit_coord = rng.random_range(0..2);
    let mut v = [0u64; 2];
    for (i, x) in v.iter_mut().enumerate() {
        let mut y = rng.random_range(0..q / s);
        if i == unit_coord {
            while y % ell == 0 {
                y = rng.random_range(0..q / s);
            }
        }
        *x = y * s % q;
    }
    v
}

const GT_CAP: usize = 60_000;

fn grouptheory_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let case = GroupTheoryCase::from_index((i % 3) as u8 + 1)?;
    let ell = [2u64, 3, 5][rng.random_range(0..3)];
    let (h, params, k) = match case {
        GroupTheoryCase::Congruence => {
            let kmax: u32 = match ell {
                2 => 5,
                3 => 4,
                _ => 3,
            };
            let k = rng.random_range(2..=kmax);
            let gap = match ell {
                2 => 3,
                3 => 2,
                _ => 1,
            };
            let n = rng.random_range(k.saturating_sub(gap).max(1)..=k);
            let q = ell.pow(k);
            let kernel = matgroup::congruence_kernel(ell, k, n)?;
            let mut h = kernel.clone();
            for _ in 0..8 {
                let mut gens = kernel.generators().to_vec();
                gens.push(random_invertible(rng, q));
                if let Ok(g) = MatGroup::generate(q, gens, GT_CAP) {
                    h = g;
                    break;
                }
            }
            let d = if rng.random_bool(0.5) { rng.random_range(0..(k - n).max(1)) } else { rng.random_range(0..=k) };
            (h, GroupTheoryParams { n, d, cartan: None }, k)
        }
        GroupTheoryCase::Irreducible => {
            let k = rng.random_range(1..=match ell {
                2 => 5,
                3 => 4,
                _ => 3,
            });
            let q = ell.pow(k);
            let mut found = None;
            for _ in 0..64 {
                let mut gens = vec![irreducible_lift(rng, ell, k)];
                if rng.random_bool(0.5) {
                    let j = rng.random_range(1..=k);
                    gens.push(random_congruent_to_identity(rng, q, ell.pow(j)));
                }
                if let Ok(g) = MatGroup::generate(q, gens, GT_CAP) {
                    if modulegen::irreducible_mod_ell(&g)? {
                        found = Some(g);
                        break;
                    }
                }
            }
            let h = found.ok_or_else(|| Error::Inconsistent("no irreducible instance drawn".into()))?;
            let d = rng.random_range(0..=k);
            (h, GroupTheoryParams { n: 0, d, cartan: None }, k)
        }
        GroupTheoryCase::CartanNormaliser => {
            let tight = ell != 5 && rng.random_bool(0.5);
            let (k, data) = random_cartan(rng, ell, tight)?;
            let q = ell.pow(k);
            let n = if tight { 1 } else { rng.random_range(1..=k) };
            let s = ell.pow(n);
            let mut cands = Vec::new();
            for x in (1..q).step_by(s as usize) {
                for y in (0..q).step_by(s as usize) {
                    let m = data.matrix(x, y);
                    if m.is_invertible() {
                        cands.push(m);
                    }
                }
            }
            let kernel = MatGroup::generate_greedy(q, cands, GT_CAP)?;
            let mut gens = kernel.generators().to_vec();
            let c0 = random_cartan_element(rng, &data);
            gens.push(data.reflection().mul(&c0));
            if rng.random_bool(0.5) {
                gens.push(random_cartan_element(rng, &data));
            }
            let h = MatGroup::generate(q, gens, 4 * GT_CAP)?;
            let d = if tight { 0 } else { rng.random_range(0..=k) };
            (h, GroupTheoryParams { n, d, cartan: Some(data) }, k)
        }
    };
    let v = random_vector_with_valuation_at_most(rng, ell, k, params.d);
    let instance = json!({
        "case": case, "ell": ell, "k": k, "params": params, "v": v, "group": descriptor(&h),
    });
    let r = modulegen::verify_grouptheory_prop(&h, v, case, &params)?;
    let detail = format!(
        "case {case:?} at {ell}^{k}: exponent {} vs claim {}{}",
        r.actual_exponent,
        r.claimed_exponent,
        if r.vacuous { " (vacuous)" } else { "" }
    );
    let gamma_one = params.cartan.map(|c| c.gamma == 1).unwrap_or(false) as u64;
    Ok(Outcome::new(r.holds, detail, instance)
        .stat("lattice_exponent", r.actual_exponent as u64)
        .stat("non_vacuous", (!r.vacuous) as u64)
        .stat("gamma_one_case", gamma_one))
}

/// Lift of an element of GL₂(F_ℓ) without eigenvalues in F_ℓ.
fn irreducible_lift(rng: &mut ChaCha8Rng, ell: u64, k: u32) -> Mat2 {
    let q = ell.pow(k);
    let base = loop {
        let m = random_invertible(rng, ell);
        // characteristic polynomial x² − tx + d has no root in F_ℓ
        let (t, d) = (m.trace(), m.det());
        if (0..ell).all(|x| (x * x + ell * ell * 2 - t * x % ell + d) % ell != 0) {
            break m;
        }
    };
    let e = base.e.map(|x| x + ell * rng.random_range(0..q / ell));
    Mat2::from_u64(e, q)
}

/// With `tight`, the level is maximal and `3 + v_ℓ(4δ) < k`, so that the
/// case 3 claim with `n = 1`, `d = 0` is not vacuous (impossible for ℓ = 5).
fn random_cartan(rng: &mut ChaCha8Rng, ell: u64, tight: bool) -> Result<(u32, CartanData)> {
    let kmax = match ell {
        2 => 6,
        3 => 4,
        _ => 3,
    };
    loop {
        let k = if tight { kmax } else { rng.random_range(1..=kmax) };
        let gamma = if ell == 2 { rng.random_range(0..2u8) } else { 0 };
        if ell == 2 && k == 1 && gamma == 0 {
            continue;
        }
        let q = ell.pow(k) as i64;
        let delta = rng.random_range(1..q.max(2) * ell as i64) % q.max(2);
        if let Ok(c) = CartanData::new(ell, k, gamma, delta) {
            if !tight || 3 + c.v_four_delta() < k {
                return Ok((k, c));
            }
        }
    }
}

fn random_cartan_element(rng: &mut ChaCha8Rng, data: &CartanData) -> Mat2 {
    let q = data.modulus();
    loop {
        let m = data.matrix(rng.random_range(0..q), rng.random_range(0..q));
        if m.is_invertible() {
            return m;
        }
    }
}

fn exponent_h1_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (ell, k, lambda, bound) = if i % 2 == 0 { (3u64, 2u32, 4u64, 3u64) } else { (2, 3, 5, 4) };
    let q = ell.pow(k);
    let mut gens = vec![Mat2::scalar(lambda, q)];
    for _ in 0..rng.random_range(1..=2) {
        gens.push(random_invertible(rng, q));
    }
    let h = MatGroup::generate(q, gens, cohomology::COHOMOLOGY_CAP)?;
    let m = GModule::new(ell, k)?;
    let r = cohomology::h1(&h, &m)?;
    let passes = bound % r.exponent == 0 && h.order() as u64 % r.exponent == 0;
    Ok(Outcome::new(
        passes,
        format!("#H = {}, H1 factors {:?}", h.order(), r.invariant_factors),
        json!({"ell": ell, "k": k, "scalar": lambda, "group": descriptor(&h)}),
    )
    .stat("h1_exponent", r.exponent))
}

fn adelic_good_ell_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (ell, n) = [(3u64, 1u32), (3, 2), (5, 1), (5, 2)][i % 4];
    let q = ell.pow(n);
    let h = if i < 4 {
        MatGroup::gl2(q)?
    } else {
        // random lifts of generators of GL₂(F_ℓ)
        let g = matgroup::smallest_nonresidue(ell).max(2);
        let base = [[1u64, 1, 0, 1], [1, 0, 1, 1], [g, 0, 0, 1]];
        let gens = base
            .iter()
            .map(|b| Mat2::from_u64(b.map(|x| x + ell * rng.random_range(0..q / ell)), q))
            .collect();
        MatGroup::generate(q, gens, matgroup::DEFAULT_CAP)?
    };
    let v = Submodule::full(crate::linalg::Ring::new(ell, n)?, 2);
    let comm = modulegen::commutator_module(&v, &h)?;
    Ok(Outcome::new(
        comm == v,
        format!("#H = {} at {ell}^{n}, [V,H] order {}", h.order(), comm.order()),
        json!({"ell": ell, "n": n, "group": descriptor(&h)}),
    ))
}

fn cm_instance(i: usize, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let cases = [(3u64, 2u32), (3, 3), (3, 4), (5, 2), (5, 3)];
    let (ell, n) = cases[i % cases.len()];
    let (_, r) = kummer::cm_counterexample(ell, n)?;
    let expected = ell.pow(n - 1) as u128;
    let passes = r.reduced_fiber_index == expected
        && r.index_in_split_cartan == expected
        && r.closure_inside_predicate
        && r.law_table_checked;
    Ok(Outcome::new(
        passes,
        format!(
            "B_{{{ell}^{n}}}: index {} in split Cartan group, fiber index {} at level {}",
            r.index_in_split_cartan, r.reduced_fiber_index, r.reduced_level
        ),
        serde_json::to_value(&r).unwrap_or(Value::Null),
    )
    .stat("fiber_index", r.reduced_fiber_index as u64))
}

const KUMMER_CAP: usize = 100_000;

pub fn random_arboreal(rng: &mut ChaCha8Rng, n: u64) -> Result<ArborealGroup> {
    for _ in 0..32 {
        let count = rng.random_range(1..=3);
        let gens: Vec<ArborealElement> = (0..count)
            .map(|_| {
                let m = if rng.random_bool(0.25) { Mat2::identity(n) } else { random_invertible(rng, n) };
                ArborealElement { t: [rng.random_range(0..n), rng.random_range(0..n)], m }
            })
            .collect();
        match ArborealGroup::generate(n, gens, KUMMER_CAP) {
            Ok(g) => return Ok(g),
            Err(Error::GroupTooLarge { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GroupTooLarge { cap: KUMMER_CAP })
}

fn kummer_identity_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = if i % 2 == 0 { 12 } else { 45 };
    let g = random_arboreal(rng, n)?;
    let report = kummer::total_failure_identity_check(&g)?;
    // the fiber order recounted from an independent closure when it is small
    let brute_ok = if g.order() <= 50_000 {
        let all = kummer::brute_force_closure(n, g.generators(), 50_000)?;
        all.len() as u128 == g.order() && all.iter().filter(|x| x.m.is_identity()).count() as u128 == report.degree
    } else {
        true
    };
    let mut remarks_ok = true;
    for d in (2..n).filter(|d| n % d == 0) {
        remarks_ok &= kummer::remark_nm_check(&g, d)?.divides;
    }
    let stable = kummer::hn_stability_check(&g).holds;
    Ok(Outcome::new(
        report.identity_holds && brute_ok && remarks_ok && stable,
        format!(
            "N = {n}: N²/#V = {}, product of failures {}",
            report.total_failure, report.product_of_failures
        ),
        json!({"descriptor": g.to_descriptor(), "report": report}),
    )
    .stat("total_failure", report.total_failure as u64))
}

fn random_sl2_lift(rng: &mut ChaCha8Rng, base: [u64; 3], ell: u64, q: u64) -> Mat2 {
    let r = q / ell;
    let [a0, b0, c0] = base;
    let a = a0 + ell * rng.random_range(0..r);
    let b = b0 + ell * rng.random_range(0..r);
    let c = c0 + ell * rng.random_range(0..r);
    let ai = arith::inv_mod(a % q, q).expect("a is a unit");
    let d = arith::mul_mod((1 + arith::mul_mod(b, c, q)) % q, ai, q);
    Mat2::from_u64([a % q, b % q, c % q, d], q)
}

fn serre_lifting_instance(_i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (ell, q) = (5u64, 25u64);
    let mut gens = vec![random_sl2_lift(rng, [1, 1, 0], ell, q), random_sl2_lift(rng, [1, 0, 1], ell, q)];
    if rng.random_bool(0.5) {
        let base = [rng.random_range(1..ell), rng.random_range(0..ell), 0];
        gens.push(random_sl2_lift(rng, base, ell, q));
    }
    let h = MatGroup::generate(q, gens, matgroup::DEFAULT_CAP)?;
    let reduced = h.reduce_level(ell)?;
    let full_mod_ell = reduced.order() == 120;
    Ok(Outcome::new(
        full_mod_ell && h.order() == 15_000 && h.elements().iter().all(|m| m.det() == 1),
        format!("#G = {}, #G mod 5 = {}", h.order(), reduced.order()),
        json!({"group": descriptor(&h)}),
    ))
}

fn zywina_instance(i: usize, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = [5u64, 7, 11, 23][i % 4];
    let eps = matgroup::smallest_nonresidue(p);
    let c = matgroup::nonsplit_cartan_modp(p, eps)?;
    let nns = matgroup::nonsplit_normaliser_modp(p, eps)?;
    let self_normalising = matgroup::normaliser_in_gl2(&nns)?.elements() == nns.elements();
    let scalars = c.scalars_in().order() as u64 == p - 1;
    let mut detail = format!("p = {p}: N(N_ns) = N_ns {self_normalising}, scalars in C_ns {scalars}");
    let mut passes = self_normalising && scalars && nns.order() == 2 * c.order();
    if p % 3 == 2 {
        let d = matgroup::d_subgroup(p, eps)?;
        let norm_d = matgroup::normaliser_in_gl2(&d)?;
        let cubes: Vec<Mat2> = c.elements().iter().map(|a| a.pow(3)).collect();
        let cubes = MatGroup::generate_greedy(p, cubes, c.order())?;
        let cubes_ok = matgroup::normaliser_in_gl2(&cubes)?.elements() == nns.elements();
        let inside = norm_d.is_subgroup_of(&nns);
        let shape = d.scalars_in().order() as u64 == p - 1 && 3 * d.order() == nns.order();
        detail.push_str(&format!(
            ", #N(D) = {}, N(D) ≤ N_ns {inside}, N(cubes) = N_ns {cubes_ok}",
            norm_d.order()
        ));
        passes &= shape;
        // the normaliser claim is only made outside T₀
        if !bounds::T0.contains(&p) {
            passes &= inside && cubes_ok;
        }
    }
    Ok(Outcome::new(passes, detail, json!({"p": p, "epsilon": eps})))
}

fn lemma_ab_instance(_i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = [3u64, 4, 5, 8, 9][rng.random_range(0..5)];
    let g = loop {
        let g = random_arboreal(rng, n)?;
        if g.order() <= 20_000 {
            break g;
        }
    };
    let r = cohomology::lemma_ab_check(&g)?;
    Ok(Outcome::new(
        r.divides && r.onto,
        format!("N = {n}: #A/[A,Q] = {}, #ker = {}", r.coinvariants_order, r.kernel_order),
        json!({"descriptor": g.to_descriptor(), "report": r}),
    ))
}

fn cohen_instance(i: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let cases = [(3u64, 4u32), (2, 6), (5, 3), (3, 5), (7, 3)];
    let (p, k) = cases[i % cases.len()];
    let q = p.pow(k);
    let modulus = Modulus::prime_power(p, k)?;
    let n_min = if p == 2 { 2 } else { 1 };
    let n = rng.random_range(n_min..k);
    let m = p.pow(rng.random_range(0..=k - n)) * [1u64, 2, 4, 5, 7][rng.random_range(0..5)].max(1);
    let vm = arith::v_p(m, p).unwrap();
    let level = (n + vm).min(k);
    let step = p.pow(level);
    let mut formula_ok = true;
    let mut search_ok = true;
    let mut checked = 0u64;
    let un: Vec<u64> = (0..q / p.pow(n)).map(|j| 1 + j * p.pow(n)).collect();
    for j in 0..q / step {
        let y = (1 + j * step) % q;
        checked += 1;
        let yr = Residue::from_u64(y, &modulus);
        match residue::mth_root_in_unit_group(&yr, m, n) {
            Ok(x) => formula_ok &= arith::pow_mod(x.value(), m, q) == y && (x.value() + q - 1) % p.pow(n) == 0,
            Err(_) => formula_ok = false,
        }
        search_ok &= un.iter().any(|&x| arith::pow_mod(x, m, q) == y);
    }
    Ok(Outcome::new(
        formula_ok && search_ok,
        format!("p = {p}, k = {k}, n = {n}, M = {m}: {checked} elements of U_{} checked", n + vm),
        json!({"p": p, "k": k, "n": n, "M": m}),
    ))
}

fn sl2_squares_instance(i: usize, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let p = [5u64, 7, 11, 13][i % 4];
    let sl = MatGroup::sl2(p)?;
    let mut squares: Vec<Mat2> = sl.elements().iter().map(|g| g.mul(g)).collect();
    squares.sort_unstable();
    squares.dedup();
    let gen = MatGroup::generate_greedy(p, squares, sl.order())?;
    Ok(Outcome::new(
        gen.order() == sl.order(),
        format!("p = {p}: squares generate a group of order {} (#SL₂ = {})", gen.order(), sl.order()),
        json!({"p": p}),
    ))
}

/// Every subgroup `H ≤ GL₂(F_ℓ)` has `H¹(H, F_ℓ²)` trivial or `Z/ℓ`.
pub fn cyclic_h1_lemma_exhaustive(ell: u64) -> Result<(usize, bool)> {
    let subs = MatGroup::gl2(ell)?.all_subgroups()?;
    let m = GModule::new(ell, 1)?;
    let mut ok = true;
    for h in &subs {
        let r = cohomology::h1(h, &m)?;
        ok &= r.invariant_factors.is_empty() || r.invariant_factors == vec![ell];
    }
    Ok((subs.len(), ok))
}

pub fn growth_recovery(ell: u64, n0: u32) -> Result<u32> {
    let top = n0 + 2;
    let tower = bounds::synthetic_tower(ell, n0, top, 4)?;
    Ok(bounds::detect_growth_parameter(&tower, 4)?.n_min)
}
