//! The release gate: one test per advertised guarantee, each printing a
//! single `ACCEPTANCE <n> ...: pass` line (visible with `--nocapture`).
//! A failing assertion in any of them means the engine must not ship.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use brieskorn::builders::{
    build_r_carrier, build_s_carrier, build_torus, lambda_assembly, sphere_suite, splice_sr,
    xi_assembly, zeta_assembly, TorusSpec,
};
use brieskorn::configs::{FiberedLagrangian, TokenKind};
use brieskorn::floer::{hf_tori, hf_with_sphere, HfOutcome};
use brieskorn::lattice::{
    build_lattice, phi_factorization, total_monodromy, twist, twist_product, verify_spectrum,
    Exponents,
};
use brieskorn::laurent::laurent_mat_mul;
use brieskorn::plane;
use brieskorn::report::t_slice_catalog;
use brieskorn::threefold::{annulus_count, build_gamma, maslov_3d};

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn acceptance_01_maslov_formulas() {
    let start = Instant::now();
    let mut cases = 0usize;
    for k in 0..=6 {
        for l in 0..=6 {
            for m in 0..=6 {
                let t = build_torus(TorusSpec::new(k, l, m)).unwrap();
                assert_eq!(t.maslov_longitude().unwrap(), 2 * (l - k), "T_{{{k},{l},{m}}}");

                let r = build_r_carrier(k, l, m, (0, 0)).unwrap();
                assert_eq!(r.maslov_longitude().unwrap(), 2 * (m - k - l), "R_{{{k},{l},{m}}}");

                let s = build_s_carrier(k, l, m, (0, 0)).unwrap();
                assert_eq!(s.maslov_longitude().unwrap(), 2 * (m - l - 1), "S_{{{k},{l},{m}}}");
                cases += 3;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(cases, 3 * 343);
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "Maslov sweep took {elapsed:?}, budget is 10 s"
    );
    println!("ACCEPTANCE 1 Maslov formulas over {cases} constructions in {elapsed:?}: pass");
}

#[test]
fn acceptance_02_klein_variants() {
    let mut cases = 0usize;
    for k in 0..=4 {
        for l in 0..=4 {
            for m in 0..=4 {
                for variant in [1i8, -1i8] {
                    if variant == -1 && k == 0 {
                        continue; // no wrap available to remove
                    }
                    let fl = build_torus(TorusSpec::new(k, l, m).with_klein(variant)).unwrap();
                    let expected = 2 * l - 2 * k - i64::from(variant);
                    assert_eq!(fl.maslov_longitude().unwrap(), expected);
                    assert!(
                        !fl.orientable().unwrap(),
                        "K_{{{k},{l},{m}}}^{variant} must be non-orientable"
                    );
                    cases += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 2 Klein variants ({cases} cases, Maslov 2l-2k∓1, non-orientable): pass");
}

#[test]
fn acceptance_03_hf_rank_table() {
    let start = Instant::now();
    let suite = sphere_suite();
    let mut certified = 0usize;
    for k in 0..=4 {
        for l in 0..=4 {
            for m in 0..=4 {
                let fl = build_torus(TorusSpec::new(k, l, m)).unwrap();
                let expected: [usize; 3] = [
                    (m + 2 * k + 1) as usize,
                    (2 * k + 1) as usize,
                    (2 * l) as usize,
                ];
                for (sphere, want) in [&suite.s1, &suite.s2, &suite.s3].into_iter().zip(expected) {
                    match hf_with_sphere(&fl, sphere).unwrap() {
                        HfOutcome::Certified { rank, .. } => {
                            assert_eq!(rank, want, "T_{{{k},{l},{m}}} against {}", sphere.name);
                            certified += 1;
                        }
                        HfOutcome::Inconclusive { .. } => panic!(
                            "T_{{{k},{l},{m}}} against {}: differential not certified",
                            sphere.name
                        ),
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(certified, 125 * 3);
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "HF table took {elapsed:?}, budget is 60 s"
    );
    println!(
        "ACCEPTANCE 3 HF rank table (m+2k+1, 2k+1, 2l), {certified} vanishing certificates \
         in {elapsed:?}: pass"
    );
}

#[test]
fn acceptance_04_mutation_obstruction() {
    let mut cases = 0usize;
    for lambda in 1..=4 {
        for k in 0..=2 {
            for l in 0..=2 {
                for m in 0..=2 {
                    let pairing = hf_tori(k, l, m, lambda).unwrap();
                    let want = 2 * lambda as usize;
                    assert_eq!(pairing.hf_rank_at(&rational(1)), want, "beta' = beta");
                    assert_eq!(pairing.hf_rank_at(&rational(-1)), want, "beta' = -beta");
                    assert_eq!(pairing.hf_rank_at(&rational(2)), 0, "beta' = 2 beta");
                    assert_eq!(pairing.hf_rank_generic(), 0, "generic local systems");
                    cases += 1;
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 4 local-system pairing rank 2λ at β'=±β and 0 at β'=2β ({cases} cases): pass"
    );
}

#[test]
fn acceptance_05_annulus_counts() {
    let mut nontrivial = 0usize;
    for n in 0..=3 {
        for k1 in 0..=3 {
            for l1 in 0..=3 {
                let xi = xi_assembly(2, k1, l1).unwrap();
                let t3 = build_gamma(n, &xi, 279).unwrap().with_displaced_pair();
                let h = plane::self_intersections(&t3.base3).unwrap().len();
                let counted = annulus_count(&t3).unwrap();
                assert_eq!(counted.h, h, "census must recompute the base crossings");
                let h = h as i64;
                assert_eq!(counted.count, h * k1, "gamma_{} with k1={k1}", 2 * n);
                assert_eq!(
                    counted.matched + counted.opposed,
                    h * (2 * k1 + l1 + 1),
                    "classification total for gamma_{} k1={k1} l1={l1}",
                    2 * n
                );
                if h > 0 && k1 > 0 {
                    nontrivial += 1;
                }
            }
        }
    }
    assert!(nontrivial > 0, "the sweep must include nonvacuous counts");
    println!(
        "ACCEPTANCE 5 annulus count h*k1 with classification h*(2k1+l1+1), \
         {nontrivial} nonvacuous cases: pass"
    );
}

#[test]
fn acceptance_06_threefold_maslov() {
    let xi = xi_assembly(2, 1, 1).unwrap();
    for n in 0..=5 {
        let t3 = build_gamma(n, &xi, 279).unwrap();
        assert_eq!(maslov_3d(&t3).unwrap(), 2 * n, "gamma_{}", 2 * n);
    }
    println!("ACCEPTANCE 6 product Maslov maslov_3d(gamma_2n x Xi) = 2n for n <= 5: pass");
}

#[test]
fn acceptance_07_spectrum_oracle() {
    let start = Instant::now();
    let mut tuples: Vec<Vec<i64>> = Vec::new();
    let entries: Vec<i64> = (2..=9).collect();
    let mut stack: Vec<Vec<i64>> = entries.iter().map(|&a| vec![a]).collect();
    while let Some(tuple) = stack.pop() {
        let rank: i64 = tuple.iter().map(|a| a - 1).product();
        if rank <= 64 {
            if tuple.len() < 4 {
                for &a in &entries {
                    let mut longer = tuple.clone();
                    longer.push(a);
                    stack.push(longer);
                }
            }
            tuples.push(tuple);
        }
    }
    tuples.sort();
    for must in [vec![3, 3], vec![2, 4], vec![3, 3, 3], vec![2, 4, 4]] {
        assert!(tuples.contains(&must), "enumeration must include {must:?}");
    }
    for tuple in &tuples {
        let e = Exponents::new(tuple.clone()).unwrap();
        let lat = build_lattice(&e);
        verify_spectrum(&lat).unwrap_or_else(|err| {
            panic!("spectrum oracle disagrees on {tuple:?}: {err}");
        });
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "spectrum sweep took {elapsed:?}, budget is 60 s"
    );
    println!(
        "ACCEPTANCE 7 twist-product spectrum equals the cyclotomic oracle on {} tuples \
         of rank <= 64 in {elapsed:?}: pass",
        tuples.len()
    );
}

#[test]
fn acceptance_08_phi_factorization() {
    for (b, k) in [(3i64, 1i64), (6, 2)] {
        let e = Exponents::new(vec![3, 3, b]).unwrap();
        let lat = build_lattice(&e);
        let factors = phi_factorization(&e, k).unwrap();
        let phi = twist_product(&lat, &factors).unwrap();
        let nu = total_monodromy(&lat);
        assert_eq!(
            phi.pow(k as u64),
            nu.pow(b as u64),
            "(3,3,{b}): phi^{k} must equal nu^{b}"
        );
    }
    println!("ACCEPTANCE 8 fractional twist identity phi^k = nu^b for (3,3,3) and (3,3,6): pass");
}

#[test]
fn acceptance_09_family_distinctness() {
    for (c, m) in [(1i64, 0i64), (2, 1)] {
        let catalog = t_slice_catalog(c, 5, m).unwrap();
        assert_eq!(catalog.entries.len(), 6, "k = 0..=5");
        assert!(catalog.distinct, "slice c={c}, m={m} must separate");
        assert!(
            catalog.discrepancies.is_empty(),
            "slice c={c}, m={m}: {:?}",
            catalog.discrepancies
        );
        let values: Vec<i64> = catalog.entries.iter().map(|e| e.value).collect();
        assert_eq!(values, vec![1, 3, 5, 7, 9, 11], "S2 ranks walk 2k+1");
        for entry in &catalog.entries {
            assert_eq!(entry.soft, catalog.entries[0].soft, "soft invariants agree");
        }
    }
    println!(
        "ACCEPTANCE 9 torus slices share soft invariants and separate by rank, \
         zero discrepancies: pass"
    );
}

#[test]
fn acceptance_10_property_suites() {
    // Deterministic companion of the randomized suites in
    // tests/properties.rs; xorshift keeps the 50 lattices reproducible.
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };

    // Form preservation under twists, 50 randomized lattices.
    for _ in 0..50 {
        let len = 1 + (next() % 3) as usize;
        let exps: Vec<i64> = (0..len).map(|_| 2 + (next() % 3) as i64).collect();
        let e = Exponents::new(exps).unwrap();
        let lat = build_lattice(&e);
        let rank = e.rank();
        if rank == 0 {
            continue;
        }
        let vector = |next: &mut dyn FnMut() -> u64| -> Vec<BigInt> {
            (0..rank).map(|_| BigInt::from((next() % 7) as i64 - 3)).collect()
        };
        let x = vector(&mut next);
        let y = vector(&mut next);
        let idx = (next() as usize) % rank;
        let sign = if next() % 2 == 0 { 1 } else { -1 };
        let tx = twist(&lat, idx, &x, sign).unwrap();
        let ty = twist(&lat, idx, &y, sign).unwrap();
        assert_eq!(lat.pairing(&tx, &ty), lat.pairing(&x, &y), "form preserved");
        assert_eq!(twist(&lat, idx, &tx, -sign).unwrap(), x, "twist inverts");
    }

    // The squared differential vanishes on every constructed complex.
    for (k, l, m, teeth) in [
        (0, 0, 0, 1),
        (0, 2, 1, 2),
        (1, 1, 0, 3),
        (1, 2, 2, 1),
        (2, 0, 1, 2),
        (2, 2, 2, 3),
    ] {
        let d = hf_tori(k, l, m, teeth).unwrap().differential();
        let dd = laurent_mat_mul(&d, &d);
        assert!(
            dd.iter().all(|row| row.iter().all(|e| e.is_zero())),
            "d^2 != 0 for ({k},{l},{m}) with {teeth} teeth"
        );
    }

    // Holonomy closes on every builder output, including every piece of
    // the assembled families.
    let mut loops: Vec<FiberedLagrangian> = Vec::new();
    for k in 0..=2 {
        for l in 0..=2 {
            loops.push(build_torus(TorusSpec::new(k, l, 1)).unwrap());
            loops.push(build_torus(TorusSpec::new(k, l, 0).with_klein(1)).unwrap());
            loops.push(build_r_carrier(k, l, 2, (0, 0)).unwrap());
            loops.push(build_s_carrier(k, l, l + 1, (0, 0)).unwrap());
            loops.push(splice_sr(k, l).unwrap());
        }
    }
    for assembly in [
        lambda_assembly(2).unwrap(),
        zeta_assembly(3).unwrap(),
        xi_assembly(2, 1, 1).unwrap(),
    ] {
        loops.extend(assembly.pieces.iter().cloned());
    }
    let loop_count = loops.len();
    for fl in &loops {
        let end = fl.holonomy().unwrap();
        assert_eq!(end.label, fl.initial_state.label, "{} holonomy closes", fl.kind.name());
    }

    // A corrupted token word is rejected: turning one swap into a
    // same-label reflection leaves holonomy closed but forces a
    // self-crossing with a repeated label.
    let fl = build_torus(TorusSpec::new(1, 2, 0)).unwrap();
    let swap = fl
        .tokens
        .iter()
        .position(|t| t.kind == TokenKind::BC)
        .expect("a torus word contains a swap");
    let mut corrupted = fl.tokens.clone();
    corrupted[swap].kind = TokenKind::CC;
    let rebuilt = FiberedLagrangian::new(
        fl.kind.clone(),
        fl.loop_.clone(),
        corrupted,
        fl.initial_state,
    );
    assert!(rebuilt.is_err(), "the corrupted word must be rejected");

    println!(
        "ACCEPTANCE 10 property suites (form preservation x50, d^2=0, holonomy closure \
         on {loop_count} loops, corrupted word rejected): pass"
    );
}
