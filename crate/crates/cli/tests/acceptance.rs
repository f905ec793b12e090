//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Every tolerance is exact (zero tolerance); run with `--nocapture` to see
//! the per-criterion lines.

use std::process::Command;

use kmlab_core::chars::{char_demazure_word, char_l, check_weyl_kac};
use kmlab_core::families::{
    lattice_rank_stability, verify_containment_order, verify_distributive,
};
use kmlab_core::frobenius::{
    check_canonical_degree, check_compatibility, find_splitting, fp_demazure_ideal, reduce_mod_p,
    verify_quotient_splitting, verify_splitting, SplittingOptions,
};
use kmlab_core::gcm::Gcm;
use kmlab_core::linalg::Q;
use kmlab_core::modules::Module;
use kmlab_core::presets::builtin_catalog;
use kmlab_core::ring::{
    demazure_ideal, depth_vectors, pluecker_quadrics, quadrics_vanish_on_extremal,
    verify_degree2_presentation, verify_ideal, RingTruncation,
};
use kmlab_core::weyl::{
    all_reduced_words, bruhat_leq, bruhat_leq_oracle, canonicalize, enumerate,
};

fn preset(name: &str) -> Gcm {
    builtin_catalog().lookup(name).unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

/// λ-sets per criterion: each fundamental weight and ρ.
fn lambda_set(g: &Gcm) -> Vec<Vec<i64>> {
    let r = g.rank();
    let mut out: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0i64; r];
            v[i] = 1;
            v
        })
        .collect();
    let rho = vec![1i64; r];
    if !out.contains(&rho) {
        out.push(rho);
    }
    out
}

#[test]
fn c01_char_vs_gram_dims() {
    let depth = 5usize;
    let mut checked = 0usize;
    for name in ["A1", "A2", "B2", "A1~1"] {
        let g = preset(name);
        for lambda in lambda_set(&g) {
            let chi = char_l(&g, &lambda, depth).unwrap();
            // full-Gram mode: independent of the character computation
            let mut module = Module::new(g.clone(), lambda.clone()).unwrap();
            for m in depth_vectors(g.rank(), depth) {
                let dim = module.dim_weight(&m);
                let coeff = chi.coeff(&m);
                assert_eq!(
                    dim as i64, coeff,
                    "{name} λ={lambda:?} m={m:?}: gram {dim} vs char {coeff}"
                );
                checked += 1;
            }
        }
    }
    report(
        "C01 char/dim oracle agreement (A1,A2,B2,A1~1; λ∈{ϖ_i,ρ}; depth ≤ 5)",
        true,
        &format!("({checked} weight spaces, exact)"),
    );
}

#[test]
fn c02_weyl_kac_truncated_identity() {
    let cases = [
        ("A1", vec![1i64], 6usize),
        ("A2", vec![1, 1], 6),
        ("A1~1", vec![1, 0], 6),
    ];
    for (name, lambda, depth) in cases {
        let g = preset(name);
        let rep = check_weyl_kac(&g, &lambda, depth).unwrap();
        assert!(
            rep.equal,
            "{name} λ={lambda:?}: first mismatch {:?}",
            rep.first_mismatch
        );
    }
    report(
        "C02 Weyl-Kac truncated identity (A1, A2 at ρ; A1~1 at Λ0; depth 6, Peterson mults)",
        true,
        "(exact)",
    );
}

#[test]
fn c03_demazure_word_independence_and_monotonicity() {
    for name in ["A2", "B2", "A1~1"] {
        let g = preset(name);
        let rho = vec![1i64; g.rank()];
        let elems = enumerate(&g, 4);
        // exact untruncated comparison: bound exceeding every extremal depth
        let full = 200usize;
        let mut chars = Vec::new();
        for w in &elems {
            let words = all_reduced_words(&g, w);
            let first = char_demazure_word(&g, &rho, &words[0], full).unwrap();
            for word in &words[1..] {
                let other = char_demazure_word(&g, &rho, word, full).unwrap();
                assert_eq!(
                    first, other,
                    "{name}: words {:?} vs {:?} disagree",
                    words[0], word
                );
            }
            chars.push(first);
        }
        for (vi, v) in elems.iter().enumerate() {
            for (wi, w) in elems.iter().enumerate() {
                if bruhat_leq(&g, v, w) {
                    assert!(
                        chars[vi].leq(&chars[wi]),
                        "{name}: char not monotone at {} ≤ {}",
                        v.display(&g),
                        w.display(&g)
                    );
                }
            }
        }
    }
    report(
        "C03 Demazure word-independence and Bruhat monotonicity (ℓ ≤ 4 on A2, B2, A1~1)",
        true,
        "(exact, all reduced words)",
    );
}

#[test]
fn c04_bruhat_engine() {
    let presets = ["A2", "B2", "G2", "A1~1", "HYP"];
    for name in presets {
        let g = preset(name);
        let elems = enumerate(&g, 5);
        for v in &elems {
            for w in &elems {
                assert_eq!(
                    bruhat_leq(&g, v, w),
                    bruhat_leq_oracle(&g, v, w),
                    "{name}: recursion vs subword oracle at {} , {}",
                    v.display(&g),
                    w.display(&g)
                );
            }
        }
        // order axioms, exhaustively at ℓ ≤ 4
        let small = enumerate(&g, 4);
        for a in &small {
            assert!(bruhat_leq(&g, a, a));
            for b in &small {
                if bruhat_leq(&g, a, b) && bruhat_leq(&g, b, a) {
                    assert_eq!(a, b, "{name}: antisymmetry");
                }
                for c in &small {
                    if bruhat_leq(&g, a, b) && bruhat_leq(&g, b, c) {
                        assert!(bruhat_leq(&g, a, c), "{name}: transitivity");
                    }
                }
            }
        }
    }
    report(
        "C04 Bruhat engine ≡ subword oracle (ℓ ≤ 5, five presets) + order axioms (ℓ ≤ 4)",
        true,
        "(exact)",
    );
}

#[test]
fn c05_thick_containment_reversal() {
    // A2, λ = ρ: all 36 pairs.
    let g = preset("A2");
    let mut module = Module::with_char_oracle(g.clone(), vec![1, 1], 4).unwrap();
    let rep = verify_containment_order(&mut module, 3, 4).unwrap();
    assert!(rep.strict);
    assert_eq!(rep.pairs_checked, 36);
    assert!(rep.pass, "A2 counterexamples: {:?}", rep.counterexamples);

    // A1~1, λ = ρ, ℓ ≤ 3 (extremal heights up to 9 enter the window).
    let g = preset("A1~1");
    let mut module = Module::with_char_oracle(g.clone(), vec![1, 1], 9).unwrap();
    let rep = verify_containment_order(&mut module, 3, 4).unwrap();
    assert!(rep.strict);
    assert_eq!(rep.pairs_checked, 49);
    assert!(rep.pass, "A1~1 counterexamples: {:?}", rep.counterexamples);

    report(
        "C05 thick containment reversal L^w ⊆ L^v ⟺ v ≤ w (A2: 36 pairs; A1~1: ℓ ≤ 3)",
        true,
        "(exact, incl. strict failures for incomparable pairs)",
    );
}

#[test]
fn c06_distributive_lattice() {
    // every nonempty S ⊆ W(A2) with |S| ≤ 3, λ = ρ, depth 4
    let g = preset("A2");
    let w_all = enumerate(&g, 3);
    assert_eq!(w_all.len(), 6);
    let mut module = Module::with_char_oracle(g.clone(), vec![1, 1], 4).unwrap();
    let mut subsets = 0usize;
    for mask in 1u32..(1 << 6) {
        if mask.count_ones() > 3 {
            continue;
        }
        let s: Vec<_> = (0..6)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| w_all[k].clone())
            .collect();
        let rep = verify_distributive(&mut module, &s, 4, 3).unwrap();
        assert!(
            rep.pass,
            "A2 S={:?} falsified: {:?}",
            rep.s, rep.falsification
        );
        subsets += 1;
    }
    assert_eq!(subsets, 41);

    // A1~1, λ = Λ0, S = {s_0, s_1}
    let g = preset("A1~1");
    let mut module = Module::with_char_oracle(g.clone(), vec![1, 0], 4).unwrap();
    let s = vec![canonicalize(&g, &[0]), canonicalize(&g, &[1])];
    let rep = verify_distributive(&mut module, &s, 4, 3).unwrap();
    assert!(rep.pass, "A1~1 falsified: {:?}", rep.falsification);

    report(
        "C06 distributive intersections ⋂ L^w = Σ L^v (A2: 41 subsets; A1~1: {s0,s1})",
        true,
        "(exact weightwise equality)",
    );
}

#[test]
fn c07_pluecker_and_presentation() {
    // quadrics annihilate all extremal points (entire finite Weyl groups)
    for (name, depth) in [("A1", 2usize), ("A2", 4), ("B2", 8)] {
        let g = preset(name);
        let mut ring = RingTruncation::build(g, 2, depth).unwrap();
        let qs = pluecker_quadrics(&ring).unwrap();
        let ok = quadrics_vanish_on_extremal(&mut ring, &qs, 4).unwrap();
        assert!(ok, "{name}: quadric fails to vanish on an extremal point");
    }
    // degree-2 presentation at full-module windows
    for (name, depth) in [("A1", 3usize), ("A2", 6), ("B2", 12)] {
        let g = preset(name);
        let mut ring = RingTruncation::build(g, 3, depth).unwrap();
        let rep = verify_degree2_presentation(&mut ring).unwrap();
        assert!(rep.pass, "{name}: presentation rows {:?}", rep.rows);
    }
    report(
        "C07 Plücker quadrics annihilate extremal points; degree-2 presentation on A1, A2, B2",
        true,
        "(exact)",
    );
}

#[test]
fn c08_section_ring_structure() {
    let g = preset("A2");
    let ring = RingTruncation::build(g.clone(), 3, 4).unwrap();
    // all stored multiplication maps surjective
    for ((la, mu, m), surj) in &ring.surjective {
        assert!(
            surj,
            "m_({la:?},{mu:?}) not surjective onto weight {m:?}"
        );
    }
    // commutativity on every stored pair of pieces
    let piece_keys: Vec<(Vec<i64>, Vec<i64>)> = ring.pieces.keys().cloned().collect();
    for (la, m1) in &piece_keys {
        for (mu, m2) in &piece_keys {
            let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
            let m: Vec<i64> = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
            if sum.iter().sum::<i64>() > 3 || m.iter().sum::<i64>() > 4 {
                continue;
            }
            let d1 = ring.dim(la, m1);
            let d2 = ring.dim(mu, m2);
            for s in 0..d1 {
                for t in 0..d2 {
                    let mut f = vec![Q::from_integer(0.into()); d1];
                    f[s] = Q::from_integer(1.into());
                    let mut gv = vec![Q::from_integer(0.into()); d2];
                    gv[t] = Q::from_integer(1.into());
                    let fg = ring.product(la, m1, &f, mu, m2, &gv);
                    let gf = ring.product(mu, m2, &gv, la, m1, &f);
                    assert_eq!(fg, gf, "commutativity at ({la:?},{m1:?})×({mu:?},{m2:?})");
                }
            }
        }
    }
    // associativity on fundamental triples
    let funds: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1]];
    for la in &funds {
        for mu in &funds {
            for nu in &funds {
                for m1 in depth_vectors(2, 4) {
                    let d1 = ring.dim(la, &m1);
                    if d1 == 0 {
                        continue;
                    }
                    for m2 in depth_vectors(2, 4) {
                        let d2 = ring.dim(mu, &m2);
                        if d2 == 0 {
                            continue;
                        }
                        for m3 in depth_vectors(2, 4) {
                            let d3 = ring.dim(nu, &m3);
                            if d3 == 0
                                || m1.iter().sum::<i64>()
                                    + m2.iter().sum::<i64>()
                                    + m3.iter().sum::<i64>()
                                    > 4
                            {
                                continue;
                            }
                            for s in 0..d1 {
                                for t in 0..d2 {
                                    for u in 0..d3 {
                                        let unit = |d: usize, k: usize| {
                                            let mut v =
                                                vec![Q::from_integer(0.into()); d];
                                            v[k] = Q::from_integer(1.into());
                                            v
                                        };
                                        let f = unit(d1, s);
                                        let gv = unit(d2, t);
                                        let h = unit(d3, u);
                                        let fg = ring.product(la, &m1, &f, mu, &m2, &gv);
                                        let lam_fg: Vec<i64> =
                                            la.iter().zip(mu).map(|(a, b)| a + b).collect();
                                        let m_fg: Vec<i64> =
                                            m1.iter().zip(&m2).map(|(a, b)| a + b).collect();
                                        let left =
                                            ring.product(&lam_fg, &m_fg, &fg, nu, &m3, &h);
                                        let gh = ring.product(mu, &m2, &gv, nu, &m3, &h);
                                        let lam_gh: Vec<i64> =
                                            mu.iter().zip(nu).map(|(a, b)| a + b).collect();
                                        let m_gh: Vec<i64> =
                                            m2.iter().zip(&m3).map(|(a, b)| a + b).collect();
                                        let right =
                                            ring.product(la, &m1, &f, &lam_gh, &m_gh, &gh);
                                        assert_eq!(left, right, "associativity");
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // Demazure ideals: multiplicative closure, quotient dims, containment reversal
    let mut ring = ring;
    let elems = enumerate(&g, 3);
    let mut ideals = Vec::new();
    for w in &elems {
        let ideal = demazure_ideal(&mut ring, w).unwrap();
        let rep = verify_ideal(&mut ring, &ideal).unwrap();
        assert!(rep.pass, "ideal check failed at {}", w.display(&g));
        ideals.push(ideal);
    }
    for (vi, v) in elems.iter().enumerate() {
        for (wi, w) in elems.iter().enumerate() {
            if bruhat_leq(&g, v, w) {
                // I^v ⊆ I^w
                for (key, piece_v) in &ideals[vi].pieces {
                    let piece_w = ideals[wi].pieces.get(key);
                    let contained = match piece_w {
                        Some(pw) => pw.contains(piece_v),
                        None => piece_v.dim() == 0,
                    };
                    assert!(
                        contained,
                        "I^{} ⊄ I^{} at {key:?}",
                        v.display(&g),
                        w.display(&g)
                    );
                }
            }
        }
    }
    report(
        "C08 section ring: surjective products, commutative, associative; I^w closed (A2, D=3, d=4)",
        true,
        "(exact rank/identity checks)",
    );
}

#[test]
fn c09_frobenius_splittings() {
    let cases = [
        ("A1", 2u64, 3usize, 3usize),
        ("A1", 3, 4, 4),
        ("A2", 2, 3, 6),
    ];
    for (name, p, deg, depth) in cases {
        let g = preset(name);
        let all_w = enumerate(&g, 10);
        let ring = RingTruncation::build_integral(g.clone(), deg, depth).unwrap();
        let mut fp = reduce_mod_p(ring, p).unwrap();
        let opts = SplittingOptions {
            compat: all_w.clone(),
            canonical: true,
        };
        let cand = find_splitting(&mut fp, &opts)
            .unwrap()
            .unwrap_or_else(|| panic!("{name} p={p}: no splitting on window"));
        assert!(
            verify_splitting(&mut fp, &cand).unwrap(),
            "{name} p={p}: invalid splitting"
        );
        for w in &all_w {
            let ideal = fp_demazure_ideal(&mut fp, w).unwrap();
            assert!(
                check_compatibility(&mut fp, &cand, &ideal).unwrap(),
                "{name} p={p}: not compatible with I^{}",
                w.display(&g)
            );
            assert!(
                verify_quotient_splitting(&mut fp, &cand, &ideal).unwrap(),
                "{name} p={p}: restriction to R/I^{} is not a splitting",
                w.display(&g)
            );
        }
        for i in 0..g.rank() {
            assert!(
                check_canonical_degree(&mut fp, &cand, i).unwrap(),
                "{name} p={p}: canonical degree bound fails at i={i}"
            );
        }
    }
    report(
        "C09 Frobenius splittings exist, compatible with all I^w, B-canonical degree bound \
         ((A1,p=2), (A1,p=3), (A2,p=2); D=p+1)",
        true,
        "(exact over F_p)",
    );
}

#[test]
fn c10_lattice_rank_stability() {
    let depth = 4usize;
    let mut checked = 0usize;
    for name in ["A1", "A2", "A1~1"] {
        let g = preset(name);
        let mut lambdas: Vec<Vec<i64>> = (0..g.rank())
            .map(|i| {
                let mut v = vec![0i64; g.rank()];
                v[i] = 1;
                v
            })
            .collect();
        if name != "A1~1" {
            let rho = vec![1i64; g.rank()];
            if !lambdas.contains(&rho) {
                lambdas.push(rho);
            }
        }
        for lambda in lambdas {
            let mut module = Module::new(g.clone(), lambda.clone()).unwrap();
            for m in depth_vectors(g.rank(), depth) {
                if module.dim_weight(&m) == 0 {
                    continue;
                }
                for p in [2u64, 3, 5] {
                    let rep = lattice_rank_stability(&mut module, &m, p);
                    assert!(
                        rep.pass,
                        "{name} λ={lambda:?} m={m:?} p={p}: rank {:?} vs dim {}",
                        rep.rank_mod_p, rep.dim
                    );
                    checked += 1;
                }
            }
        }
    }
    report(
        "C10 integral word lattice rank stability mod p ∈ {2,3,5} (A1, A2, A1~1; depth ≤ 4)",
        true,
        &format!("({checked} lattice checks, exact)"),
    );
}

#[test]
fn c11_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_kmlab");
    let runs: Vec<Vec<&str>> = vec![
        vec!["gcm", "check", "A2", "--no-timestamp"],
        vec!["roots", "--preset", "A1~1", "--depth", "3", "--mults", "--no-timestamp"],
        vec![
            "char", "l", "--preset", "A2", "--lambda", "1,1", "--depth", "3",
            "--no-timestamp", "--format", "json",
        ],
        vec![
            "char", "demazure", "--preset", "A1", "--lambda", "2", "--w", "1", "--depth", "3",
            "--no-timestamp",
        ],
        vec![
            "dims", "--preset", "A2", "--lambda", "1,1", "--depth", "3", "--no-timestamp",
        ],
        vec![
            "lattice-check", "--preset", "A2", "--lambda", "1,1", "-S", "1,2", "--depth", "4",
            "--search-len", "3", "--no-timestamp",
        ],
        vec![
            "order-check", "--preset", "A2", "--lambda", "1,1", "--max-len", "2", "--depth", "4",
            "--no-timestamp",
        ],
        vec!["pluecker", "--preset", "A1", "--depth", "2", "--no-timestamp"],
        vec![
            "pluecker", "--preset", "A1", "--depth", "3", "--present", "--no-timestamp",
        ],
        vec![
            "frobenius", "--preset", "A1", "--prime", "2", "--deg", "3", "--depth", "3",
            "--compat", "1", "--canonical", "--no-timestamp",
        ],
        vec![
            "weylkac", "--preset", "A2", "--lambda", "1,1", "--depth", "4", "--no-timestamp",
        ],
    ];
    for args in &runs {
        let out1 = Command::new(bin).args(args).output().unwrap();
        let out2 = Command::new(bin).args(args).output().unwrap();
        assert!(
            out1.status.success(),
            "{args:?}: exit {:?}, stderr: {}",
            out1.status.code(),
            String::from_utf8_lossy(&out1.stderr)
        );
        assert_eq!(
            out1.status.code(),
            out2.status.code(),
            "{args:?}: exit codes differ"
        );
        assert_eq!(
            out1.stdout, out2.stdout,
            "{args:?}: reports are not byte-identical"
        );
        assert!(!out1.stdout.is_empty(), "{args:?}: empty report");
    }
    // exit-code contract: usage error 2, falsification 1
    let bad = Command::new(bin)
        .args(["gcm", "check", "NOPE"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    report(
        "C11 CLI determinism: byte-identical golden runs for every subcommand (--no-timestamp)",
        true,
        &format!("({} invocations, run twice each)", runs.len()),
    );
}

/// Extra coverage: the distributive searcher handles a mixed-length pair on
/// B2 within its search bound.
#[test]
fn extra_distributive_b2() {
    let g = preset("B2");
    let mut module = Module::with_char_oracle(g.clone(), vec![1, 1], 8).unwrap();
    let s = vec![canonicalize(&g, &[0]), canonicalize(&g, &[1, 0, 1])];
    let rep = verify_distributive(&mut module, &s, 8, 4).unwrap();
    assert!(rep.pass);
    assert!(rep.s_prime.is_some());
}
