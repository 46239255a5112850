//! Acceptance gate: ten end-to-end criteria, one test (one result line)
//! each, with stated runtime budgets enforced. Criteria serialize on a
//! shared lock so the budgets are measured without cross-test contention.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wp4m::abelian::Order;
use wp4m::adjan_rabin::{build_pw, build_qw, check_condition_21, rhs_basis_set, Condition21};
use wp4m::enumerate::{enumerate_cosets, Outcome, Strategy};
use wp4m::freebasis::nielsen_reduce;
use wp4m::handles::{
    build_markov_complex, predict_boundary, replay_slides, slide_reduce, BoundaryKind,
    HandleError, SlideError, TrivialityVerdict,
};
use wp4m::presentations::{
    apply_exponent_substitution, parse_presentation, PresentationError,
};
use wp4m::quotients::{hom_count, FiniteTarget, TargetKind};
use wp4m::word_problem::{cyclic_orders_of, syllable_reduce};
use wp4m::words::{free_reduce, parse_word, GeneratorName, Sign, Word};
use wp4m::Presentation;

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn assert_budget(start: Instant, cap: Duration) {
    let elapsed = start.elapsed();
    assert!(elapsed <= cap, "budget exceeded: {elapsed:?} > {cap:?}");
}

fn seed_c2c3() -> Presentation {
    Presentation::free_product_of_cyclics(&[2, 3])
}

fn certificate(seed: &Presentation) -> Condition21 {
    check_condition_21(seed).expect("seed satisfies the order condition")
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[GeneratorName], max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let mut w = Word::empty();
    for _ in 0..len {
        let mut g = Word::generator(gens[rng.random_range(0..gens.len())].clone());
        if rng.random_bool(0.5) {
            g = g.invert();
        }
        w = w.concat(&g);
    }
    w
}

/// Product of conjugated seed relators: trivial by construction.
fn random_trivial_word(rng: &mut ChaCha8Rng, seed: &Presentation) -> Word {
    let mut w = Word::empty();
    for _ in 0..rng.random_range(1..=3) {
        let c = random_word(rng, seed.generators(), 3);
        let r = &seed.relators()[rng.random_range(0..seed.relators().len())];
        let r = if rng.random_bool(0.5) { r.invert() } else { r.clone() };
        w = w.concat(&c).concat(&r).concat(&c.invert());
    }
    w
}

#[test]
fn criterion_01_structural_counts() {
    let _g = serial();
    let start = Instant::now();
    let seed = seed_c2c3();
    let cert = certificate(&seed);
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC01);
    for _ in 0..50 {
        let w = random_word(&mut rng, seed.generators(), 12);
        let qw = build_qw(&seed, &w, &cert).unwrap();
        assert_eq!(qw.generators().len(), 6);
        assert_eq!(qw.relators().len(), 7);
        let (pw, _) = build_pw(&seed, &w, &cert).unwrap();
        assert_eq!(pw.generators().len(), 2);
        assert_eq!(pw.relators().len(), 3);
    }
    assert_budget(start, Duration::from_secs(1));
}

#[test]
fn criterion_02_hom_counts_survive_elimination() {
    let _g = serial();
    let seed = seed_c2c3();
    let cert = certificate(&seed);
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC02);
    let pairs: Vec<(Presentation, Presentation)> = (0..10)
        .map(|_| {
            let w = random_word(&mut rng, seed.generators(), 12);
            let qw = build_qw(&seed, &w, &cert).unwrap();
            let (pw, _) = build_pw(&seed, &w, &cert).unwrap();
            (qw, pw)
        })
        .collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());

    let start = Instant::now();
    let s3 = FiniteTarget::standard(TargetKind::S3);
    for (qw, pw) in &pairs {
        assert_eq!(hom_count(qw, &s3, jobs), hom_count(pw, &s3, jobs));
    }
    assert_budget(start, Duration::from_secs(5));

    for kind in [TargetKind::A4, TargetKind::S4] {
        let t = FiniteTarget::standard(kind);
        for (qw, pw) in &pairs {
            assert_eq!(
                hom_count(qw, &t, jobs),
                hom_count(pw, &t, jobs),
                "target {}",
                kind.name()
            );
        }
    }
    assert_budget(start, Duration::from_secs(300));
}

#[test]
fn criterion_03_trivial_words_collapse() {
    let _g = serial();
    let start = Instant::now();
    let seed = seed_c2c3();
    let cert = certificate(&seed);
    let orders = cyclic_orders_of(&seed).expect("seed is a free product of cyclics");
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC03);
    for _ in 0..10 {
        let w = random_trivial_word(&mut rng, &seed);
        assert!(syllable_reduce(&w, &orders).is_trivial());
        let (pw, _) = build_pw(&seed, &w, &cert).unwrap();
        for kind in TargetKind::ALL {
            let t = FiniteTarget::standard(kind);
            assert_eq!(hom_count(&pw, &t, 1), 1, "target {}", kind.name());
        }
        let ab = pw.abelianization();
        assert!(ab.is_trivial());
        assert!(ab.invariant_factors().iter().all(|f| f.is_one()));
    }
    assert_budget(start, Duration::from_secs(60));
}

#[test]
fn criterion_04_padding_words_form_a_basis() {
    let _g = serial();
    let start = Instant::now();
    for n in 1..=10 {
        let set = rhs_basis_set(n);
        let reduction = nielsen_reduce(&set);
        assert!(reduction.is_basis(), "n = {n}");
        assert_eq!(reduction.rank(), n + 3, "n = {n}");
    }
    assert_budget(start, Duration::from_secs(5));
}

fn perm_compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn perm_invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn word_to_perm(w: &Word, gens: &[GeneratorName], images: &[Vec<usize>]) -> Vec<usize> {
    let mut acc: Vec<usize> = (0..images[0].len()).collect();
    for l in w.letters() {
        let idx = gens.iter().position(|g| g == &l.gen).expect("known generator");
        let p = match l.sign {
            Sign::Minus => perm_invert(&images[idx]),
            _ => images[idx].clone(),
        };
        acc = perm_compose(&acc, &p);
    }
    acc
}

/// Order of the permutation group generated by `gens`, by plain closure.
fn cayley_order(gens: &[Vec<usize>]) -> usize {
    let identity: Vec<usize> = (0..gens[0].len()).collect();
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = perm_compose(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

#[test]
fn criterion_05_enumeration_matches_cayley_orders() {
    let _g = serial();
    let start = Instant::now();

    let calibration = [
        ("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n", 6),
        ("gens: a\nrel: a^5\n", 5),
        ("gens: a b\nrel: a\nrel: b\n", 1),
    ];
    for (text, order) in calibration {
        let p = parse_presentation(text).unwrap();
        match enumerate_cosets(&p, Strategy::Hlt, 10_000, None) {
            Outcome::Finite(t) => assert_eq!(t.order(), order),
            Outcome::BoundExceeded { .. } => panic!("calibration run must finish"),
        }
    }

    // ten presentations with independently verified permutation models
    let corpus: [(&str, &str, &[&[usize]]); 10] = [
        ("c2", "gens: a\nrel: a^2\n", &[&[1, 0]]),
        ("c3", "gens: a\nrel: a^3\n", &[&[1, 2, 0]]),
        ("c5", "gens: a\nrel: a^5\n", &[&[1, 2, 3, 4, 0]]),
        (
            "c2xc2",
            "gens: a b\nrel: a^2\nrel: b^2\nrel: a b a^-1 b^-1\n",
            &[&[1, 0, 2, 3], &[0, 1, 3, 2]],
        ),
        (
            "c6",
            "gens: a b\nrel: a^2\nrel: b^3\nrel: a b a^-1 b^-1\n",
            &[&[1, 0, 2, 3, 4], &[0, 1, 3, 4, 2]],
        ),
        (
            "s3",
            "gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n",
            &[&[1, 0, 2], &[1, 2, 0]],
        ),
        (
            "d4",
            "gens: a b\nrel: a^4\nrel: b^2\nrel: a b a b\n",
            &[&[1, 2, 3, 0], &[0, 3, 2, 1]],
        ),
        (
            // unit quaternions acting on themselves by left multiplication
            "q8",
            "gens: a b\nrel: a^4\nrel: a^2 b^-2\nrel: b^-1 a b a\n",
            &[
                &[1, 4, 3, 6, 5, 0, 7, 2],
                &[2, 7, 4, 1, 6, 3, 0, 5],
            ],
        ),
        (
            "a4",
            "gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b\n",
            &[&[1, 0, 3, 2], &[1, 2, 0, 3]],
        ),
        (
            "s4",
            "gens: a b\nrel: a^2\nrel: b^4\nrel: a b a b a b\n",
            &[&[1, 0, 2, 3], &[1, 2, 3, 0]],
        ),
    ];

    for (name, text, images) in corpus {
        let p = parse_presentation(text).unwrap();
        let images: Vec<Vec<usize>> = images.iter().map(|p| p.to_vec()).collect();
        let identity: Vec<usize> = (0..images[0].len()).collect();
        // the permutations must actually model the presentation
        for r in p.relators() {
            assert_eq!(
                word_to_perm(r, p.generators(), &images),
                identity,
                "{name}: relator {} fails in the model",
                r.render()
            );
        }
        let expected = cayley_order(&images);
        assert!(expected <= 24, "{name}: corpus cap");
        for strategy in [Strategy::Hlt, Strategy::Felsch] {
            match enumerate_cosets(&p, strategy, 10_000, None) {
                Outcome::Finite(t) => assert_eq!(t.order(), expected, "{name}"),
                Outcome::BoundExceeded { .. } => panic!("{name}: must finish"),
            }
        }
    }
    assert_budget(start, Duration::from_secs(10));
}

#[test]
fn criterion_06_stretch_enumeration_never_misreports() {
    let _g = serial();
    let start = Instant::now();
    let seed = seed_c2c3();
    let cert = certificate(&seed);
    let w = seed.word("x1 x1").unwrap();
    let orders = cyclic_orders_of(&seed).unwrap();
    assert!(syllable_reduce(&w, &orders).is_trivial());
    let (pw, _) = build_pw(&seed, &w, &cert).unwrap();
    match enumerate_cosets(&pw, Strategy::Hlt, 5_000_000, None) {
        Outcome::Finite(t) => {
            assert_eq!(t.order(), 1, "finite order above 1 contradicts triviality");
        }
        // running out of the coset budget is an allowed outcome here
        Outcome::BoundExceeded { .. } => {}
    }
    assert_budget(start, Duration::from_secs(600));
}

fn gcd_of(tuple: &[u64]) -> u64 {
    tuple.iter().fold(0, |g, &x| num_integer::gcd(g, x))
}

#[test]
fn criterion_07_slide_reduction_on_random_tuples() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC07);
    let mut done = 0;
    while done < 1000 {
        let len = rng.random_range(1..=8);
        let tuple: Vec<u64> = (0..len).map(|_| rng.random_range(0..=10_000)).collect();
        if gcd_of(&tuple) != 1 {
            assert!(matches!(
                slide_reduce(&tuple),
                Err(SlideError::GcdNotOne(_))
            ));
            continue;
        }
        let seq = slide_reduce(&tuple).unwrap();
        let mut expected = vec![0u64; len];
        expected[0] = 1;
        assert_eq!(seq.final_tuple, expected);
        // move-by-move replay: side conditions checked, gcd preserved
        let mut current = tuple;
        for mv in &seq.moves {
            current = replay_slides(&current, std::slice::from_ref(mv)).unwrap();
            assert_eq!(gcd_of(&current), 1);
        }
        assert_eq!(current, expected);
        done += 1;
    }
    // scaled tuples are rejected up front
    let mut rejected = 0;
    while rejected < 50 {
        let len = rng.random_range(1..=8);
        let g = rng.random_range(2..=50u64);
        let tuple: Vec<u64> = (0..len).map(|_| g * rng.random_range(0..=200)).collect();
        assert!(gcd_of(&tuple) != 1);
        assert!(matches!(
            slide_reduce(&tuple),
            Err(SlideError::GcdNotOne(_))
        ));
        rejected += 1;
    }
    assert_budget(start, Duration::from_secs(10));
}

#[test]
fn criterion_08_boundary_prediction_by_relator_count() {
    let _g = serial();
    let start = Instant::now();
    for k in 1..=6usize {
        let gens: Vec<String> = (1..=k).map(|i| format!("g{i}")).collect();
        let mut text = format!("gens: {}\n", gens.join(" "));
        for g in &gens {
            text.push_str(&format!("rel: {g}\n"));
        }
        let p = parse_presentation(&text).unwrap();
        let complex = build_markov_complex(&p, true);
        let boundary = predict_boundary(&complex, TrivialityVerdict::ProvedTrivial).unwrap();
        assert_eq!(
            boundary.kind,
            BoundaryKind::ConnectedSumS2xS2 { count: k - 1 },
            "k = {k}"
        );
        assert_eq!(boundary.b2, Some(2 * (k as u64 - 1)), "k = {k}");
        assert_eq!(boundary.signature, Some(0), "k = {k}");
    }
    let nontrivial = build_markov_complex(&seed_c2c3(), true);
    assert!(matches!(
        predict_boundary(&nontrivial, TrivialityVerdict::ProvedTrivial),
        Err(HandleError::InconsistentVerdict)
    ));
    assert_budget(start, Duration::from_secs(1));
}

#[test]
fn criterion_09_conjugation_exponents_bound_image_orders() {
    let _g = serial();
    let start = Instant::now();
    let p = parse_presentation("gens: a b c d e\n").unwrap();
    let d = GeneratorName::new("d").unwrap();
    let e = GeneratorName::new("e").unwrap();
    let mu = [p.word("a").unwrap(), p.word("b").unwrap()];
    let q = apply_exponent_substitution(&p, 4, 5, &d, &e, &mu).unwrap();
    let orders = q.abelianization().generator_orders();
    let divides = |ord: &Order, m: u64| match ord {
        Order::Finite(n) => (BigInt::from(m) % n).is_zero(),
        Order::Infinite => false,
    };
    assert!(divides(&orders[3], 3), "image of d: {:?}", orders[3]);
    assert!(divides(&orders[4], 4), "image of e: {:?}", orders[4]);
    assert!(matches!(
        apply_exponent_substitution(&p, 3, 5, &d, &e, &mu),
        Err(PresentationError::BadExponent(3))
    ));
    assert_budget(start, Duration::from_secs(1));
}

#[test]
fn criterion_10_word_algebra_laws() {
    let _g = serial();
    let start = Instant::now();
    let gens: Vec<GeneratorName> = ["a", "b", "c"]
        .iter()
        .map(|s| GeneratorName::new(s).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC10);
    const CASES: usize = 10_000;

    // reduction is a fixed point on already-reduced words
    for _ in 0..CASES {
        let w = random_word(&mut rng, &gens, 20);
        assert_eq!(free_reduce(w.letters().iter().cloned()), w);
    }

    // substitution is a homomorphism
    for _ in 0..CASES {
        let u = random_word(&mut rng, &gens, 10);
        let v = random_word(&mut rng, &gens, 10);
        let images: BTreeMap<GeneratorName, Word> = gens
            .iter()
            .map(|g| (g.clone(), random_word(&mut rng, &gens, 6)))
            .collect();
        assert_eq!(
            u.concat(&v).substitute(&images).unwrap(),
            u.substitute(&images)
                .unwrap()
                .concat(&v.substitute(&images).unwrap())
        );
    }

    // group laws
    for _ in 0..CASES {
        let u = random_word(&mut rng, &gens, 10);
        let v = random_word(&mut rng, &gens, 10);
        let w = random_word(&mut rng, &gens, 10);
        assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        assert_eq!(u.concat(&v).invert(), v.invert().concat(&u.invert()));
        assert_eq!(u.invert().invert(), u);
        assert!(u.concat(&u.invert()).is_empty());
    }

    // exponent sums add under concatenation
    for _ in 0..CASES {
        let u = random_word(&mut rng, &gens, 10);
        let v = random_word(&mut rng, &gens, 10);
        for g in &gens {
            assert_eq!(
                u.concat(&v).exponent_sum_of(g),
                u.exponent_sum_of(g) + v.exponent_sum_of(g)
            );
        }
    }

    // parse inverts render
    for _ in 0..CASES {
        let w = random_word(&mut rng, &gens, 20);
        assert_eq!(parse_word(&w.render(), &gens).unwrap(), w);
    }

    assert_budget(start, Duration::from_secs(30));
}
