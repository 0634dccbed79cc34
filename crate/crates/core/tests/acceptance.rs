use std::process::ExitCode;
use std::time::Instant;

use kummer_core::bounds::{a_ell, b_ell, c_total, pgl2_exponent, t0_set, tilde_n_bound, universal_m, T0};
use kummer_core::cohomology::{h1, h1_cyclic_oracle, GModule};
use kummer_core::kummer::{cm_counterexample, ArborealElement};
use kummer_core::matgroup::{cartan, cartan_normaliser, smallest_nonresidue, CartanData, MatGroup, DEFAULT_CAP};
use kummer_core::modulegen::{commutator_module, Submodule};
use kummer_core::residue::arith::{lcm, pow_mod};
use kummer_core::residue::{mth_root_in_unit_group, Modulus, Residue};
use kummer_core::suites::{cyclic_h1_lemma_exhaustive, growth_recovery, random_invertible, run_suite};
use kummer_core::Result;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;

fn cartan_orders() -> Result<(bool, String)> {
    let mut ok = true;
    let mut seen = Vec::new();
    for ell in [3u64, 5, 7] {
        for k in [1u32, 2] {
            let pk = ell.pow(k - 1) as usize;
            for (delta, expected, kind) in [
                (1i64, pk * pk * (ell as usize - 1).pow(2), "split"),
                (smallest_nonresidue(ell) as i64, pk * pk * (ell as usize * ell as usize - 1), "non-split"),
            ] {
                let data = CartanData::new(ell, k, 0, delta)?;
                let c = cartan(&data)?;
                let n = cartan_normaliser(&c, &data)?;
                ok &= c.order() == expected && n.order() == 2 * c.order() && c.is_subgroup_of(&n);
                seen.push(format!("{kind} {ell}^{k}: {}", c.order()));
            }
        }
    }
    Ok((ok, seen.join(", ")))
}

fn grouptheory() -> Result<(bool, String)> {
    let r = run_suite("grouptheory-prop", SEED, 600)?;
    let per_case: Vec<usize> = (0..3).map(|c| r.outcomes.iter().filter(|o| o.index % 3 == c).count()).collect();
    let gamma_one = r.statistics.get("max_gamma_one_case").and_then(|v| v.as_u64()).unwrap_or(0) > 0;
    Ok((
        r.all_passed() && per_case == [200, 200, 200] && gamma_one,
        format!("{}/{} pass, per case {per_case:?}, ℓ=2 γ=1 exercised: {gamma_one}", r.passed, r.instances),
    ))
}

fn cohomology() -> Result<(bool, String)> {
    let gl2 = h1(&MatGroup::gl2(2)?, &GModule::new(2, 1)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let levels = [(2u64, 2u32), (2, 3), (3, 2), (3, 3), (5, 1), (5, 2)];
    let mut agree = 0;
    for i in 0..100 {
        let (ell, k) = levels[i % levels.len()];
        let q = ell.pow(k);
        let sigma = random_invertible(&mut rng, q);
        let g = MatGroup::generate(q, vec![sigma], DEFAULT_CAP)?;
        let m = GModule::new(ell, k)?;
        if h1(&g, &m)? == h1_cyclic_oracle(&sigma, &m)? {
            agree += 1;
        }
    }
    let (n2, ok2) = cyclic_h1_lemma_exhaustive(2)?;
    let (n3, ok3) = cyclic_h1_lemma_exhaustive(3)?;
    Ok((
        gl2.is_zero() && agree == 100 && ok2 && ok3,
        format!("H¹(GL₂(F₂)) order {}, cyclic oracle {agree}/100, subgroups of GL₂(F₂) {n2}, GL₂(F₃) {n3}", gl2.order),
    ))
}

fn exponent_h1() -> Result<(bool, String)> {
    let r = run_suite("exponent-h1", SEED, 100)?;
    let ell3 = r.outcomes.iter().filter(|o| o.index % 2 == 0).count();
    Ok((
        r.all_passed() && ell3 == 50 && r.instances - ell3 == 50,
        format!("{}/{} pass (50 at 9 with 4·Id, 50 at 8 with 5·Id)", r.passed, r.instances),
    ))
}

fn adelic_good_ell() -> Result<(bool, String)> {
    let mut ok = true;
    let mut seen = Vec::new();
    for ell in [3u64, 5] {
        for n in [1u32, 2] {
            let q = ell.pow(n);
            let h = MatGroup::gl2(q)?;
            let ring = kummer_core::linalg::Ring::new(ell, n)?;
            let v = Submodule::full(ring, 2);
            let c = commutator_module(&v, &h)?;
            ok &= c == v;
            seen.push(format!("{ell}^{n}: #[V,H]={}", c.order()));
        }
    }
    Ok((ok, seen.join(", ")))
}

fn kummer_identity() -> Result<(bool, String)> {
    let r = run_suite("kummer-identity", SEED, 40)?;
    let at12 = r.outcomes.iter().filter(|o| o.index % 2 == 0).count();
    Ok((
        r.all_passed() && at12 == 20 && r.instances - at12 == 20,
        format!("{}/{} pass (20 at N=12, 20 at N=45)", r.passed, r.instances),
    ))
}

fn cm() -> Result<(bool, String)> {
    let (g3, r3) = cm_counterexample(5, 3)?;
    let (_, r4) = cm_counterexample(5, 4)?;
    // random products of group elements stay in the group
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let proj = g3.torsion_projection().elements();
    let fiber = g3.fiber_elements();
    let pick = |rng: &mut ChaCha8Rng| {
        let i = rng.random_range(0..proj.len());
        let t = fiber[rng.random_range(0..fiber.len())];
        let l = g3.lift_of(&proj[i]).unwrap();
        ArborealElement::translation(t, 125).mul(&ArborealElement::new([l[0] as i128, l[1] as i128], proj[i]))
    };
    let mut sampled_ok = true;
    for _ in 0..100_000 {
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        sampled_ok &= g3.contains(&x) && g3.contains(&y) && g3.contains(&x.mul(&y));
    }
    let ok = r3.closure_inside_predicate
        && r3.law_table_checked
        && sampled_ok
        && r3.reduced_level == 25
        && r3.reduced_fiber_order == 25
        && r3.reduced_fiber_index == 25
        && r4.index_in_split_cartan == 125;
    Ok((
        ok,
        format!(
            "#B_125={} (predicate count {}), law on all (t₂,d₂) pairs {}, 10⁵ sampled products closed {sampled_ok}, level 25 fiber {} index {}, n=4 index {}",
            r3.order, r3.predicate_count, r3.law_table_checked, r3.reduced_fiber_order, r3.reduced_fiber_index, r4.index_in_split_cartan
        ),
    ))
}

fn serre() -> Result<(bool, String)> {
    let r = run_suite("serre-lifting", SEED, 50)?;
    Ok((r.all_passed() && r.instances == 50, format!("{}/{} lifts of SL₂(F₅) have order 15000", r.passed, r.instances)))
}

fn growth() -> Result<(bool, String)> {
    let mut ok = true;
    let mut seen = Vec::new();
    for ell in [2u64, 3, 5] {
        for n0 in [1u32, 2] {
            let got = growth_recovery(ell, n0)?;
            let expected = if ell == 2 { n0.max(2) } else { n0 };
            ok &= got == expected;
            seen.push(format!("ℓ={ell} n₀={n0}: {got}"));
        }
    }
    Ok((ok, seen.join(", ")))
}

fn constants() -> Result<(bool, String)> {
    let cm = CartanData::new(3, 1, 0, 2)?;
    let hand = a_ell(1, 0, 3, None) == 4
        && a_ell(1, 0, 3, Some(&cm)) == 8
        && a_ell(2, 1, 5, None) == 10
        && b_ell(1, 1, 7) == 2
        && b_ell(1, 2, 2) == 5
        && b_ell(3, 6, 3) == 9
        && tilde_n_bound(1, 1, 5) == 1
        && tilde_n_bound(1, 12, 2) == 3
        && tilde_n_bound(2, 12, 3) == 3
        && c_total(&[]).value == Some(1)
        && c_total(&[(2, 4, 2)]).value == Some(64)
        && c_total(&[(2, 4, 2), (3, 8, 2)]).value == Some(64 * 3u128.pow(10));
    let m = universal_m();
    let exps: Vec<u64> = T0.iter().map(|&p| pgl2_exponent(p)).collect();
    let divisible = exps.iter().all(|e| m % e == 0);
    let minimal = exps.iter().fold(1, |a, &e| lcm(a, e)) == m;
    let ok = t0_set() == vec![2, 3, 5, 7, 11, 13, 17, 37] && hand && m == universal_m() && divisible && minimal && pgl2_exponent(2) == 6;
    Ok((ok, format!("T₀ {:?}, hand values {hand}, M = {m}, exponents {exps:?}", t0_set())))
}

fn cohen() -> Result<(bool, String)> {
    let (p, k, n) = (3u64, 4u32, 1u32);
    let q = p.pow(k);
    let modulus = Modulus::prime_power(p, k)?;
    let u1: Vec<u64> = (0..q / p).map(|j| 1 + j * p).collect();
    let mut ok = true;
    let mut checked = 0;
    for (m, v) in [(3u64, 1u32), (9, 2)] {
        let step = p.pow(n + v);
        for j in 0..q / step {
            let y = 1 + j * step;
            let root = mth_root_in_unit_group(&Residue::from_u64(y, &modulus), m, n)?;
            let formula = pow_mod(root.value(), m, q) == y && root.value() % p == 1;
            let search = u1.iter().any(|&x| pow_mod(x, m, q) == y);
            ok &= formula && search;
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} elements y checked for M ∈ {{3, 9}} by formula and exhaustive search")))
}

type Criterion = fn() -> Result<(bool, String)>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("Cartan orders and normaliser index", cartan_orders),
        ("lattice containment suite", grouptheory),
        ("first cohomology", cohomology),
        ("H¹ exponent under scalars", exponent_h1),
        ("[V,H] = V at good primes", adelic_good_ell),
        ("total failure identity", kummer_identity),
        ("CM counterexample", cm),
        ("SL₂ lifting at level 25", serre),
        ("growth parameter recovery", growth),
        ("constants", constants),
        ("M-th roots in unit groups", cohen),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name} ({:.1}s): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
